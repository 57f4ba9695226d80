use crate::error::{Error, Result};

use super::{Expr, Func};

/// Symbolic `times`-fold derivative with respect to `x`.
///
/// Results are simplified by constant folding and elimination of additive zeros and
/// multiplicative ones. `abs` is rejected because it is not differentiable everywhere.
pub fn differentiate(e: &Expr, times: usize) -> Result<Expr> {
    if times > 0 && e.contains_abs() {
        return Err(Error::NotDifferentiable(e.to_string()));
    }
    let mut out = e.clone();
    for _ in 0..times {
        out = derive(&out);
    }
    Ok(out)
}

fn derive(e: &Expr) -> Expr {
    match e {
        Expr::Const(_) => Expr::Const(0.0),
        Expr::Var => Expr::Const(1.0),
        Expr::Add(a, b) => add(derive(a), derive(b)),
        Expr::Sub(a, b) => sub(derive(a), derive(b)),
        Expr::Mul(a, b) => add(mul(derive(a), (**b).clone()), mul((**a).clone(), derive(b))),
        Expr::Div(a, b) => div(
            sub(mul(derive(a), (**b).clone()), mul((**a).clone(), derive(b))),
            pow((**b).clone(), 2),
        ),
        Expr::Pow(a, p) => mul(
            mul(Expr::Const(*p as f64), pow((**a).clone(), p - 1)),
            derive(a),
        ),
        Expr::Call(f, a) => {
            let inner = (**a).clone();
            let outer = match f {
                Func::Exp => e.clone(),
                Func::Sin => call(Func::Cos, inner),
                Func::Cos => mul(Expr::Const(-1.0), call(Func::Sin, inner)),
                Func::Sqrt => div(Expr::Const(1.0), mul(Expr::Const(2.0), e.clone())),
                Func::Abs => unreachable!("rejected before differentiation"),
            };
            mul(outer, derive(a))
        }
    }
}

fn call(f: Func, a: Expr) -> Expr {
    Expr::Call(f, Box::new(a))
}

fn add(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x + y),
        (Expr::Const(z), e) | (e, Expr::Const(z)) if z == 0.0 => e,
        (a, b) => Expr::Add(Box::new(a), Box::new(b)),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x - y),
        (e, Expr::Const(0.0)) => e,
        (Expr::Const(0.0), e) => mul(Expr::Const(-1.0), e),
        (a, b) => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x * y),
        (Expr::Const(z), _) | (_, Expr::Const(z)) if z == 0.0 => Expr::Const(0.0),
        (Expr::Const(o), e) | (e, Expr::Const(o)) if o == 1.0 => e,
        // Constants are gathered on the left: c1 * (c2 * e) = (c1 c2) * e.
        (Expr::Const(c), Expr::Mul(l, r)) | (Expr::Mul(l, r), Expr::Const(c))
            if matches!(*l, Expr::Const(_)) =>
        {
            let Expr::Const(c2) = *l else { unreachable!() };
            mul(Expr::Const(c * c2), *r)
        }
        (e, Expr::Const(c)) => Expr::Mul(Box::new(Expr::Const(c)), Box::new(e)),
        (a, b) => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(0.0), _) => Expr::Const(0.0),
        (e, Expr::Const(1.0)) => e,
        (a, b) => Expr::Div(Box::new(a), Box::new(b)),
    }
}

fn pow(a: Expr, p: i32) -> Expr {
    match (a, p) {
        (_, 0) => Expr::Const(1.0),
        (e, 1) => e,
        (Expr::Const(c), p) => Expr::Const(c.powi(p)),
        (a, p) => Expr::Pow(Box::new(a), p),
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn d(src: &str, times: usize) -> Expr {
        differentiate(&parse(src).unwrap(), times).unwrap()
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(d("sin(x)", 1), parse("cos(x)").unwrap());
        assert_eq!(d("exp(-x)", 2), parse("exp(-x)").unwrap());
        assert_eq!(d("x^3", 2), parse("6*x").unwrap());
        assert_eq!(d("x^3", 4), Expr::Const(0.0));
        assert_eq!(d("x^2 + 1", 0), parse("x^2 + 1").unwrap());
    }

    #[test]
    fn abs_is_rejected() {
        let e = parse("abs(x - 1)").unwrap();
        assert!(matches!(differentiate(&e, 1), Err(Error::NotDifferentiable(_))));
        assert_eq!(differentiate(&e, 0).unwrap(), e);
    }

    #[test]
    fn quotient_and_sqrt_rules() {
        let q = d("1/x", 1);
        assert!((q.eval(2.0).unwrap() + 0.25).abs() < 1e-15);
        let s = d("sqrt(x)", 1);
        assert!((s.eval(4.0).unwrap() - 0.25).abs() < 1e-15);
        let c = d("cos(2*x)", 1);
        assert!((c.eval(0.3).unwrap() + 2.0 * (0.6f64).sin()).abs() < 1e-15);
    }
}
