//! Monte Carlo estimate of a mixed moment next to its exact value.

use childstats::child_set::ChildSet;
use childstats::exact::render_rational;
use childstats::moments::{raw_moment, MomentSpec};
use childstats::oracle::monte_carlo_moment;

fn main() -> Result<(), childstats::error::Error> {
    let set: ChildSet = "0,1,2,3".parse()?;
    let (n, p) = (40, (2, 1));
    let exact = raw_moment(&MomentSpec::new(set.clone(), n, (0, 3), p)?, p.0, p.1)?;
    let est = monte_carlo_moment(&set, n, (0, Some(3)), p, 200_000, 2024)?;
    println!("E[X_0^2 X_3] at n = {n}");
    println!("exact       {}", render_rational(&exact, 6));
    println!("monte carlo {:.6} +- {:.6} ({} samples)", est.mean, est.std_error, est.samples);
    Ok(())
}
