//! Coefficients of the joint generating function f(x; y_0, ..., y_k),
//! obtained by iterating f = x * sum_s y_s f^s.

use childstats::oracle::joint_gf_fixpoint;

fn main() -> Result<(), childstats::error::Error> {
    let set = "0,1,2".parse()?;
    let gf = joint_gf_fixpoint(&set, 7)?;
    for n in 1..=7 {
        let terms: Vec<String> = gf
            .at(n)
            .iter()
            .map(|c| {
                let ys: Vec<String> = c
                    .exponents
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| if e == 1 { format!("y{i}") } else { format!("y{i}^{e}") })
                    .collect();
                format!("{}*{}", c.count, ys.join("*"))
            })
            .collect();
        println!("[x^{n}] = {}   (total {})", terms.join(" + "), gf.tree_count(n));
    }
    Ok(())
}
