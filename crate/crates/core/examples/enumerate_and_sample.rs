//! Listing small trees and drawing uniform random ones.

use childstats::oracle::{enumerate_trees, sample_tree_uniform, UniformSampler};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), childstats::error::Error> {
    let set = "0,1,2".parse()?;
    for t in enumerate_trees(&set, 5)? {
        println!("{t}");
    }

    let t = sample_tree_uniform(&set, 20, 42)?;
    println!("\nrandom tree on 20 vertices: {t}");
    println!("leaves {}, unary {}, binary {}", t.count(0), t.count(1), t.count(2));

    let sampler = UniformSampler::new(&"0,2,3".parse()?, 31)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let t = sampler.sample(&mut rng);
    println!("\nprobability of this draw: {}", sampler.probability_of(&t).unwrap());
    println!("1 / number of trees:      1/{}", sampler.tree_count());
    Ok(())
}
