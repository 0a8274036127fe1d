//! Scaled mixed moments against the bivariate normal with the same correlation,
//! as n grows.

use childstats::moments::MomentSpec;
use childstats::gauss::normality_gap_report;

fn main() -> Result<(), childstats::error::Error> {
    for n in [25, 50, 100, 200, 400] {
        let spec = MomentSpec::new("0,1,2,3".parse()?, n, (0, 1), (4, 4))?;
        let report = normality_gap_report(&spec)?;
        let worst = report
            .rows
            .iter()
            .max_by(|a, b| a.gap.to_f64().abs().total_cmp(&b.gap.to_f64().abs()))
            .unwrap();
        let r22 = report.row(2, 2).unwrap();
        println!(
            "n={n:<4} rho={}  a22={} M(2,2)={}  largest gap {} at ({},{})",
            report.rho.render(6),
            r22.scaled.render(6),
            r22.reference.render(6),
            worst.gap.render(6),
            worst.p1,
            worst.p2
        );
    }
    Ok(())
}
