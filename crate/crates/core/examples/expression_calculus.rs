//! Parsing, printing, evaluating and symbolically differentiating expressions.

use szasz_durrmeyer::fexpr::{differentiate, parse};

fn main() -> szasz_durrmeyer::Result<()> {
    for src in ["exp(-x)*sin(2*x)", "x^3 - 2*x + 1", "1/(1 + x^2)", "sqrt(x + 1)", "-x^2"] {
        let e = parse(src)?;
        let d1 = differentiate(&e, 1)?;
        let d2 = differentiate(&e, 2)?;
        println!("f   = {e}");
        println!("f'  = {d1}");
        println!("f'' = {d2}");
        println!("f(0.5) = {:.12}, f'(0.5) = {:.12}\n", e.eval(0.5)?, d1.eval(0.5)?);
    }
    match parse("2 * (x + ") {
        Err(e) => println!("error: {e}"),
        Ok(e) => println!("unexpected parse: {e}"),
    }
    let kink = parse("abs(x - 1)")?;
    println!("kinks of {kink}: {:?}; derivative: {}", kink.kinks(), differentiate(&kink, 1).unwrap_err());
    Ok(())
}
