//! Raw, central and scaled moments with exact fractions and rounded decimals.

use childstats::exact::{fraction_string, render_rational};
use childstats::moments::{moment_report, MomentSpec};

fn main() -> Result<(), childstats::error::Error> {
    let spec = MomentSpec::new("0,1,2,3".parse()?, 40, (0, 2), (4, 4))?;
    let report = moment_report(&spec, 12)?;
    println!("S = {}, n = {}, X = X_{}, Y = X_{}", report.child_set, report.n, report.s1, report.s2);
    println!("E[X]   = {}", fraction_string(&report.raw[&(1, 0)]));
    println!("Var X  = {}", render_rational(&report.central[&(2, 0)], 12));
    if let Some(rho) = &report.correlation {
        println!("rho    = {}  (rho^2 = {})", rho.render(12), fraction_string(&rho.square()));
    }
    println!("\n p1 p2  scaled");
    for ((p1, p2), a) in &report.scaled {
        if p1 + p2 >= 3 {
            println!("{p1:>3} {p2:>2}  {}", a.render(12));
        }
    }
    Ok(())
}
