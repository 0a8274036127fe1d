//! Power-sum numerators N_{p1,p2} = sum over trees of X_{s1}^p1 X_{s2}^p2.

use childstats::child_set::ChildSet;
use childstats::lagrange::{numerator_grid, numerator_mixed, NumeratorQuery};

fn main() -> Result<(), childstats::error::Error> {
    let set: ChildSet = "0,1,2".parse()?;
    let leaves = numerator_mixed(&NumeratorQuery::single(set.clone(), 30, 0, 1))?;
    let unary = numerator_mixed(&NumeratorQuery::single(set.clone(), 30, 1, 1))?;
    let mixed = numerator_mixed(&NumeratorQuery::mixed(set.clone(), 30, (0, 1), (2, 3)))?;
    println!("N_1(X_0)     = {leaves}");
    println!("N_1(X_1)     = {unary}");
    println!("N_2,3(X_0,X_1) = {mixed}");

    // all powers up to (2,2) for n = 1..8, computed in parallel
    let table = numerator_grid(&set, (0, Some(2)), 1..=8, 2, 2)?;
    println!("\n n  N00  N10  N01  N11  N22");
    for n in 1..=8 {
        let g = |a, b| table.get(n, a, b).unwrap().to_string();
        println!("{n:>2} {:>4} {:>4} {:>4} {:>4} {:>4}", g(0, 0), g(1, 0), g(0, 1), g(1, 1), g(2, 2));
    }
    Ok(())
}
