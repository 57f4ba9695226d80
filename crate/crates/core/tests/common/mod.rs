#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use szasz_durrmeyer::numerics::{binomial, falling_factorial, factorial};
use szasz_durrmeyer::FunctionSpec;

/// Exact value `P + Q e^{-nx}` with rational `P`, `Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpPair {
    pub poly: BigRational,
    pub exp_coeff: BigRational,
}

impl ExpPair {
    pub fn to_f64(&self, n: f64, x: f64) -> f64 {
        self.poly.to_f64().unwrap() + self.exp_coeff.to_f64().unwrap() * (-n * x).exp()
    }

    pub fn correction(&self, n: f64, x: f64) -> f64 {
        self.exp_coeff.to_f64().unwrap() * (-n * x).exp()
    }
}

pub fn rat(v: f64) -> BigRational {
    BigRational::from_float(v).unwrap()
}

fn int(v: BigInt) -> BigRational {
    BigRational::from_integer(v)
}

fn pow(base: &BigRational, e: u32) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * base)
}

/// `S_{n,j} e_r (x)` from the binomial/Vandermonde expansion of the operator, exactly.
pub fn exact_moment(n: f64, j: i64, r: u32, x: f64) -> ExpPair {
    let (nr, xr) = (rat(n), rat(x));
    if r == 0 {
        return ExpPair { poly: BigRational::one(), exp_coeff: BigRational::zero() };
    }
    let mut poly = BigRational::zero();
    for k in 0..=r {
        let c = int(binomial(r as i64, k) * falling_factorial(r as i64 - j, k));
        poly += c * pow(&xr, r - k) / pow(&nr, k);
    }
    let mut exp_coeff = BigRational::zero();
    let lambda = &nr * &xr;
    for k in 0..(j - r as i64).max(0) {
        let k = k as u32;
        let w = int(falling_factorial(k as i64 + r as i64 - j, r));
        exp_coeff -= w * pow(&lambda, k) / int(factorial(k));
    }
    exp_coeff /= pow(&nr, r);
    ExpPair { poly, exp_coeff }
}

/// `S_{n,j} (t - x)^s (x)` as the binomial expansion over exact moments.
pub fn exact_central_moment(n: f64, j: i64, s: u32, x: f64) -> ExpPair {
    let mx = -rat(x);
    let mut out = ExpPair { poly: BigRational::zero(), exp_coeff: BigRational::zero() };
    for r in 0..=s {
        let c = int(binomial(s as i64, r)) * pow(&mx, s - r);
        let m = exact_moment(n, j, r, x);
        out.poly += &c * m.poly;
        out.exp_coeff += c * m.exp_coeff;
    }
    out
}

pub fn rel_close(got: f64, want: f64, rel: f64, abs: f64) -> bool {
    (got - want).abs() <= rel * want.abs() + abs
}

/// Smooth catalog functions with valid growth constants.
pub fn smooth_catalog() -> Vec<FunctionSpec> {
    [("exp(-x)", 0.0, 1.0), ("sin(x)", 0.0, 1.0), ("cos(2*x)", 0.0, 1.0), ("exp(x/2)", 0.5, 1.0), ("1/(1+x^2)", 0.0, 1.0)]
        .iter()
        .map(|&(e, a, k)| FunctionSpec::parse_expression(e, a, k).unwrap())
        .collect()
}

/// Nonnegative catalog functions.
pub fn nonnegative_catalog() -> Vec<FunctionSpec> {
    [("exp(-x)", 0.0, 1.0), ("abs(x-1)", 1.0, 1.0), ("1/(1+x^2)", 0.0, 1.0), ("exp(x)", 1.0, 1.0), ("sin(x)^2", 0.0, 1.0)]
        .iter()
        .map(|&(e, a, k)| FunctionSpec::parse_expression(e, a, k).unwrap())
        .collect()
}

pub fn geometric_grid(start: f64, count: i32) -> Vec<f64> {
    (0..count).map(|i| start * 2f64.powi(i)).collect()
}
