//! The differential operator D_j^2 = (1-j)D + xD^2 in exact arithmetic and the expansion
//! coefficients c_{k,j} = D_j^{2k} f / k!.

use szasz_durrmeyer::diffop::{apply_dj2k, expansion_coefficient, expansion_polynomial};
use szasz_durrmeyer::{FunctionSpec, Polynomial};

fn main() -> szasz_durrmeyer::Result<()> {
    let p = Polynomial::from_ints(&[1, -2, 0, 3, 1]);
    println!("p = {p}");
    for j in [0, 1, 2] {
        for k in 0..=3 {
            println!("  j = {j}, k = {k}: D^(2k) p = {}   c_k = {}", apply_dj2k(j, k, &p), expansion_polynomial(j, k, &p));
        }
    }
    println!("D_2^2 x^2 = {} (preserved monomial is annihilated)", apply_dj2k(2, 1, &Polynomial::monomial(2)));

    let f = FunctionSpec::parse_expression("exp(-x)", 0.0, 1.0)?;
    for j in [0, 1, 3] {
        let cs: Vec<String> = (0..4)
            .map(|k| Ok(format!("{:+.10}", expansion_coefficient(j, k, &f.derivatives(1.0, k, k + 1)?, 1.0)?.value)))
            .collect::<szasz_durrmeyer::Result<_>>()?;
        println!("exp(-x) at 1, j = {j}: c_0..c_3 = {}", cs.join(", "));
    }
    Ok(())
}
