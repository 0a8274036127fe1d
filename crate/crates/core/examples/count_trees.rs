//! Tree counts for several child sets.
//!
//! ```text
//! cargo run --example count_trees
//! ```

use childstats::child_set::ChildSet;
use childstats::lagrange::count_trees;

fn main() {
    for s in ["0,1,2", "0,2", "0,1,3", "0,2,3", "0,1,2,3"] {
        let set: ChildSet = s.parse().unwrap();
        let row: Vec<String> = (1..=12).map(|n| count_trees(&set, n).to_string()).collect();
        println!("{set:<10} {}", row.join(" "));
    }
    let set: ChildSet = "0,1,2".parse().unwrap();
    println!("f_30 on {{0,1,2}} = {}", count_trees(&set, 30));
    let big = count_trees(&set, 1000).to_string();
    println!("f_1000 on {{0,1,2}} has {} digits, starts {}...", big.len(), &big[..20]);
}
