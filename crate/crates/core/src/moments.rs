//! Closed-form moments `S_{n,j} e_r` and central moments `S_{n,j} (t - x)^s`.
//!
//! Each moment splits into a polynomial part in `x` and, for `r < j`, an exponentially
//! small correction `e^{-nx} * (polynomial in nx)` coming from the boundary terms
//! `k < j` of the operator.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{
    binomial, big_to_f64, falling_factorial, falling_factorial_f64, log_poisson, powi0,
    CompensatedSum,
};

/// Operator index `n` (any positive real) and family parameter `j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatorParams {
    pub n: f64,
    pub j: i64,
}

impl OperatorParams {
    pub fn new(n: f64, j: i64) -> Result<Self> {
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::Domain(format!("operator index n must be positive, got {n}")));
        }
        Ok(Self { n, j })
    }

    /// Same `n`, family parameter shifted to `j + shift`.
    pub fn shifted(self, shift: i64) -> Self {
        Self { j: self.j + shift, ..self }
    }
}

/// `M_{n,j,s,1} + M_{n,j,s,2}`: polynomial main part plus the exponentially small tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CentralMomentSplit {
    pub main: f64,
    pub tail: f64,
    pub total: f64,
}

fn check_x(x: f64) -> Result<()> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("evaluation point x must be nonnegative, got {x}")));
    }
    Ok(())
}

/// Coefficients `a_k = C(r,k) (r-j)^(k falling) / n^k` of `x^{r-k}` in the polynomial part.
fn polynomial_part_coeffs(params: OperatorParams, r: u32) -> Vec<f64> {
    (0..=r)
        .map(|k| {
            let c = binomial(r as i64, k) * falling_factorial(r as i64 - params.j, k);
            big_to_f64(&c) / params.n.powi(k as i32)
        })
        .collect()
}

/// Weights `c_k = (k + r - j)^(r falling)` of `s_{n,k}(x)` in the correction, `k = 0..=j-1-r`.
/// Empty when `r >= j`.
fn correction_weights(j: i64, r: u32) -> Vec<f64> {
    let upper = j - 1 - r as i64;
    if upper < 0 {
        return Vec::new();
    }
    (0..=upper)
        .map(|k| falling_factorial_f64(k + r as i64 - j, r))
        .collect()
}

/// `(S_{n,j} e_r)(x)`.
pub fn moment(params: OperatorParams, r: u32, x: f64) -> Result<f64> {
    moment_derivative(params, r, x, 0)
}

/// `d^m/dx^m (S_{n,j} e_r)(x)`, differentiating the closed form term by term.
///
/// The correction `sum_k c_k s_{n,k}(x)` is differentiated with
/// `s_{n,k}^{(m)} = n^m sum_l (-1)^{m-l} C(m,l) s_{n,k-l}`.
pub fn moment_derivative(params: OperatorParams, r: u32, x: f64, m: u32) -> Result<f64> {
    check_x(x)?;
    if r == 0 {
        return Ok(if m == 0 { 1.0 } else { 0.0 });
    }
    if m > r && params.j <= r as i64 {
        return Ok(0.0);
    }
    let n = params.n;

    // Horner over the powers x^{r-k-m}, k = 0..=r-m.
    let coeffs = polynomial_part_coeffs(params, r);
    let mut poly = 0.0;
    for (k, a) in coeffs.iter().enumerate() {
        let k = k as u32;
        if k + m > r {
            break;
        }
        poly = poly * x + a * falling_factorial_f64((r - k) as i64, m);
    }

    let weights = correction_weights(params.j, r);
    if weights.is_empty() {
        return Ok(poly);
    }
    let scale = -n.powi(-(r as i32)) * n.powi(m as i32);
    let lambda = n * x;
    let mut tail = CompensatedSum::new();
    for i in 0..weights.len() {
        // Coefficient of s_{n,i}(x) after m differentiations.
        let mut c = 0.0;
        for l in 0..=m {
            if let Some(w) = weights.get(i + l as usize) {
                let sign = if (m - l).is_multiple_of(2) { 1.0 } else { -1.0 };
                c += sign * big_to_f64(&binomial(m as i64, l)) * w;
            }
        }
        if c != 0.0 {
            tail.add(c * log_poisson(i as u64, lambda).exp());
        }
    }
    let mut total = CompensatedSum::new();
    total.add(poly);
    total.add(scale * tail.value());
    Ok(total.value())
}

/// `(S_{n,j} (t - x)^s)(x)` from its closed form, split into main part and tail.
pub fn central_moment(params: OperatorParams, s: u32, x: f64) -> Result<CentralMomentSplit> {
    check_x(x)?;
    if s == 0 {
        return Ok(CentralMomentSplit { main: 1.0, tail: 0.0, total: 1.0 });
    }
    let n = params.n;
    let j = params.j;

    let mut main = CompensatedSum::new();
    for k in 0..=s / 2 {
        let comb = falling_factorial(s as i64, 2 * k)
            * falling_factorial(s as i64 - k as i64 - j, s - 2 * k);
        if comb == 0.into() {
            continue;
        }
        let kfact = big_to_f64(&crate::numerics::factorial(k));
        main.add(powi0(x, k) / (kfact * n.powi((s - k) as i32)) * big_to_f64(&comb));
    }
    let main = main.value();

    let mut tail = CompensatedSum::new();
    if j >= 2 {
        let lambda = n * x;
        for r in 1..=s {
            let weights = correction_weights(j, r);
            if weights.is_empty() {
                continue;
            }
            let inner: f64 = weights
                .iter()
                .enumerate()
                .map(|(k, w)| w * log_poisson(k as u64, lambda).exp())
                .collect::<CompensatedSum>()
                .value();
            let outer = big_to_f64(&binomial(s as i64, r)) * powi0(-x, s - r) * n.powi(-(r as i32));
            tail.add(-outer * inner);
        }
    }
    let tail = tail.value();
    let mut total = CompensatedSum::new();
    total.add(main);
    total.add(tail);
    Ok(CentralMomentSplit { main, tail, total: total.value() })
}

/// Bounds on the first two central moments: exact pairs for `j <= 1`,
/// `[(1-j)/n, 0]` and `[0, 2x/n + (j-1)(j-2)/n^2]` for `j >= 2`.
pub fn central_moment_bounds(params: OperatorParams, s: u32, x: f64) -> Result<(f64, f64)> {
    check_x(x)?;
    let n = params.n;
    let j = params.j as f64;
    match s {
        1 => {
            let v = (1.0 - j) / n;
            Ok(if params.j >= 2 { (v, 0.0) } else { (v, v) })
        }
        2 => {
            let v = 2.0 * x / n + (j - 1.0) * (j - 2.0) / (n * n);
            Ok(if params.j >= 2 { (0.0, v) } else { (v, v) })
        }
        _ => Err(Error::Domain(format!("central moment bounds exist only for s in {{1, 2}}, got {s}"))),
    }
}
