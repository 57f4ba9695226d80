//! Evaluates S_{n,j} f(x) through the series path and, for polynomials, the closed form.

use szasz_durrmeyer::operator::{evaluate, evaluate_series, DEFAULT_TAIL_TOL};
use szasz_durrmeyer::{FunctionSpec, OperatorParams, QuadratureConfig};

fn main() -> szasz_durrmeyer::Result<()> {
    let q = QuadratureConfig::default();
    let f = FunctionSpec::parse_expression("exp(-x)*cos(x)", 0.0, 1.0)?;
    println!("f = {f}, x = 1");
    println!("{:>6} {:>3} {:>22} {:>12} {:>6}", "n", "j", "S_{n,j} f(x)", "trunc bound", "terms");
    for n in [10.0, 100.0, 1000.0] {
        for j in [-1, 0, 1, 3] {
            let r = evaluate(OperatorParams::new(n, j)?, &f, 1.0, &q, DEFAULT_TAIL_TOL)?;
            println!("{n:>6} {j:>3} {:>22.16} {:>12.3e} {:>6}", r.value, r.truncation_error_bound, r.terms_used);
        }
    }
    println!("f(1) = {:.16}", f.eval(1.0)?);

    let e3 = FunctionSpec::monomial(3);
    let params = OperatorParams::new(20.0, 2)?;
    let closed = evaluate(params, &e3, 1.5, &q, DEFAULT_TAIL_TOL)?.value;
    let series = evaluate_series(params, &e3, 1.5, &q, DEFAULT_TAIL_TOL)?.value;
    println!("S_(20,2) x^3 at 1.5: closed form {closed:.16}, series {series:.16}");
    Ok(())
}
