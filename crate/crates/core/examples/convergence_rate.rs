//! Error of S_{n,j} f(x) against the modulus-of-continuity bound along a doubling n grid.

use szasz_durrmeyer::experiments::{converge_report, ExperimentSettings};
use szasz_durrmeyer::FunctionSpec;

fn main() -> szasz_durrmeyer::Result<()> {
    let f = FunctionSpec::parse_expression("abs(x-1)", 1.0, 1.0)?;
    let grid: Vec<f64> = (0..11).map(|i| 10.0 * 2f64.powi(i)).collect();
    let rep = converge_report(&f, 0, 1.0, &grid, &ExperimentSettings::default())?;
    println!("f = {}, j = {}, x = {}", rep.function, rep.j, rep.x);
    println!("{:>8} {:>14} {:>14}", "n", "error", "bound");
    for r in &rep.rows {
        println!("{:>8} {:>14.6e} {:>14.6e}", r.n, r.error, r.bound.unwrap_or(f64::NAN));
    }
    if let Some(fit) = rep.fit {
        println!("empirical order: slope {:.4} (r^2 {:.5})", fit.slope, fit.r_squared);
    }
    for v in &rep.verdicts {
        println!("{}: {} ({})", v.criterion, if v.pass { "pass" } else { "fail" }, v.detail);
    }
    Ok(())
}
