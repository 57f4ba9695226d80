//! Remainders of the asymptotic expansion after q terms and their fitted order.

use szasz_durrmeyer::experiments::{voronovskaja_fit, ExperimentSettings};
use szasz_durrmeyer::FunctionSpec;

fn main() -> szasz_durrmeyer::Result<()> {
    let f = FunctionSpec::parse_expression("exp(-x)", 0.0, 1.0)?;
    let grid: Vec<f64> = (0..11).map(|i| 10.0 * 2f64.powi(i)).collect();
    let settings = ExperimentSettings::default();
    for j in [0, 1, 3] {
        for q in 0..=2 {
            let rep = voronovskaja_fit(&f, j, 1.0, q, &grid, &settings)?;
            let slope = rep.fit.map_or(f64::NAN, |f| f.slope);
            println!("j = {j}, q = {q}: remainder slope {slope:+.4}");
            for v in &rep.verdicts {
                println!("    {}: {} ({})", v.criterion, if v.pass { "pass" } else { "fail" }, v.detail);
            }
        }
    }
    Ok(())
}
