//! Derivatives of S_{n,j} f and their expansion with coefficients c^{(m)}_{k,j}.

use szasz_durrmeyer::experiments::{simultaneous_coefficients, simultaneous_fit, ExperimentSettings};
use szasz_durrmeyer::operator::{evaluate_derivative, DEFAULT_TAIL_TOL};
use szasz_durrmeyer::{FunctionSpec, OperatorParams, QuadratureConfig};

fn main() -> szasz_durrmeyer::Result<()> {
    let f = FunctionSpec::parse_expression("sin(x)", 0.0, 1.0)?;
    let q = QuadratureConfig::default();
    for m in 0..=2 {
        let exact = f.derivative_at(1.0, m as usize)?;
        for n in [20.0, 200.0, 2000.0] {
            let d = evaluate_derivative(OperatorParams::new(n, 1)?, &f, 1.0, m, &q, DEFAULT_TAIL_TOL)?;
            println!("m = {m}, n = {n:>6}: (S f)^(m)(1) = {:+.12}   f^(m)(1) = {exact:+.12}", d.value);
        }
    }
    let c = simultaneous_coefficients(&f, 1, 1.0, 1, 3)?;
    println!("c^(1)_k for k = 0..2: {c:?}");

    let grid: Vec<f64> = (0..11).map(|i| 10.0 * 2f64.powi(i)).collect();
    let rep = simultaneous_fit(&FunctionSpec::monomial(4), 1, 1.0, 1, 2, &grid, &ExperimentSettings::default())?;
    println!("x^4, j = 1, m = 1, q = 2: remainder slope {:.4}", rep.fit.map_or(f64::NAN, |f| f.slope));
    Ok(())
}
