//! Exact polynomial calculus and the differential operator `D_j^2 = (1-j) D + x D^2`,
//! together with the asymptotic-expansion coefficients built from it.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{binomial, factorial, powi0, CompensatedSum};

/// Dense polynomial over the rationals; `coeffs[i]` multiplies `x^i`.
/// Trailing zeros are always trimmed, so the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    coeffs: Vec<BigRational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(coeffs: Vec<BigRational>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    /// Polynomial with integer coefficients, lowest power first.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    /// Converts binary64 coefficients exactly (every finite double is a dyadic rational).
    pub fn from_f64(coeffs: &[f64]) -> Result<Self> {
        coeffs
            .iter()
            .map(|&c| {
                BigRational::from_float(c)
                    .ok_or_else(|| Error::Domain(format!("polynomial coefficient {c} is not finite")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    /// The monomial `e_r(x) = x^r`.
    pub fn monomial(r: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); r + 1];
        coeffs[r] = BigRational::one();
        Self { coeffs }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, power: usize) -> BigRational {
        self.coeffs.get(power).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(rational_to_f64).collect()
    }

    pub fn eval_exact(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Evaluation in binary64: exact rational evaluation at the (exact) value of `x`,
    /// rounded once at the end.
    pub fn eval(&self, x: f64) -> f64 {
        match BigRational::from_float(x) {
            Some(xr) => rational_to_f64(&self.eval_exact(&xr)),
            None => f64::NAN,
        }
    }

    /// `times`-fold derivative.
    pub fn differentiate(&self, times: usize) -> Self {
        if times >= self.coeffs.len() {
            return Self::zero();
        }
        let coeffs = (times..self.coeffs.len())
            .map(|power| {
                let factor = (0..times).fold(BigInt::one(), |acc, i| acc * BigInt::from(power - i));
                &self.coeffs[power] * BigRational::from_integer(factor)
            })
            .collect();
        Self::new(coeffs)
    }

    /// Multiplication by `x`.
    pub fn shift_up(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(BigRational::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (power, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let unit = a.is_one();
            match (power, unit) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{a}*x")?,
                (_, true) => write!(f, "x^{power}")?,
                (_, false) => write!(f, "{a}*x^{power}")?,
            }
        }
        Ok(())
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    // BigRational::to_f64 rounds correctly for values in range.
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn differentiate_poly(p: &Polynomial, times: usize) -> Polynomial {
    p.differentiate(times)
}

/// `D_j^2 p = (1 - j) p' + x p''`.
pub fn apply_dj2(j: i64, p: &Polynomial) -> Polynomial {
    let first = p.differentiate(1).scale(&BigRational::from_integer((1 - j).into()));
    let second = p.differentiate(2).shift_up();
    first.add(&second)
}

/// `D_j^{2k}` as the k-th iterate of `D_j^2`; identity for `k = 0`.
pub fn apply_dj2k(j: i64, k: usize, p: &Polynomial) -> Polynomial {
    (0..k).fold(p.clone(), |acc, _| apply_dj2(j, &acc))
}

/// `c_{k,j}(p, .) = D_j^{2k} p / k!` as an exact polynomial.
pub fn expansion_polynomial(j: i64, k: usize, p: &Polynomial) -> Polynomial {
    let inv = BigRational::new(BigInt::one(), factorial(k as u32));
    apply_dj2k(j, k, p).scale(&inv)
}

/// One coefficient of the asymptotic expansion of `S_{n,j} f` (or of its m-th derivative).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpansionTerm {
    pub order: usize,
    pub derivative_order: usize,
    pub value: f64,
}

fn check_arity(derivs: &[f64], k: usize) -> Result<()> {
    if derivs.len() != k + 1 {
        return Err(Error::Arity { expected: k + 1, got: derivs.len() });
    }
    Ok(())
}

/// `c_{k,j}(f, x) = sum_{s=0}^{k} f^{(k+s)}(x) / s! * C(k-j, k-s) * x^s`.
///
/// `derivs[s]` holds `f^{(k+s)}(x)` for `s = 0..=k`.
pub fn expansion_coefficient(j: i64, k: usize, derivs: &[f64], x: f64) -> Result<ExpansionTerm> {
    simultaneous_coefficient(j, k, 0, derivs, x)
}

/// `c_{k,j}^{(m)}(f, x) = sum_{i=0}^{k} f^{(k+m+i)}(x) / i! * C(k+m-j, k-i) * x^i`, the
/// coefficient of `n^{-k}` in the expansion of `(S_{n,j} f)^{(m)}(x)`.
///
/// `derivs[i]` holds `f^{(k+m+i)}(x)` for `i = 0..=k`.
pub fn simultaneous_coefficient(
    j: i64,
    k: usize,
    m: usize,
    derivs: &[f64],
    x: f64,
) -> Result<ExpansionTerm> {
    check_arity(derivs, k)?;
    let top = k as i64 + m as i64 - j;
    let value = derivs
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let weight = BigRational::new(binomial(top, (k - i) as u32), factorial(i as u32));
            rational_to_f64(&weight) * powi0(x, i as u32) * d
        })
        .collect::<CompensatedSum>()
        .value();
    if !value.is_finite() {
        return Err(Error::Domain(format!("expansion coefficient c_{k} is not finite")));
    }
    Ok(ExpansionTerm { order: k, derivative_order: m, value })
}
