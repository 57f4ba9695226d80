//! Exponential decay of S_{n,j} f(x) when f vanishes near x.

use szasz_durrmeyer::experiments::{localization_probe, ExperimentSettings};
use szasz_durrmeyer::FunctionSpec;

fn main() -> szasz_durrmeyer::Result<()> {
    let g = FunctionSpec::parse_expression("exp(x)", 1.0, 1.0)?;
    let grid: Vec<f64> = (1..=16).map(|i| 20.0 * i as f64).collect();
    for delta in [0.2, 0.3, 0.4] {
        let rep = localization_probe(&g, 1.0, delta, 0, &grid, &ExperimentSettings::default())?;
        let fit = rep.fit.expect("values above the floor");
        println!(
            "delta = {delta}: |S f(1)| from {:.3e} to {:.3e}, decay constant {:.5}, r^2 {:.5}",
            rep.rows[0].value,
            rep.rows[rep.rows.len() - 1].value,
            rep.decay_constant.unwrap_or(f64::NAN),
            fit.r_squared
        );
    }
    Ok(())
}
