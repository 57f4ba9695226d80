//! Numerical evaluation of `(S_{n,j} f)(x)` and its derivatives in `x`.
//!
//! ```text
//! (S_{n,j} f)(x) = f(0) sum_{k<j} s_{n,k}(x) + sum_{k>=max(j,0)} s_{n,k}(x) n int_0^inf s_{n,k-j}(t) f(t) dt
//! ```
//!
//! The series is cut to a window around `nx` whose Poisson mass outside is certified by
//! Chernoff bounds; each inner integral is taken over a window around the mode of the
//! Gamma density with panel-wise Gauss–Legendre. Polynomials go through the closed-form
//! moments instead.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fexpr::FunctionSpec;
use crate::moments::{moment_derivative, OperatorParams};
use crate::numerics::{
    big_to_f64, binomial, log_poisson, poisson_lower_tail_bound, poisson_tail_bound,
    CompensatedSum,
};
use crate::quadrature::{integrate_panels, GaussLegendre};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureConfig {
    pub points_per_panel: usize,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { points_per_panel: 32, rel_tol: 1e-10, max_panels: 64 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.points_per_panel < 2 {
            return Err(Error::Domain("quadrature needs at least 2 points per panel".into()));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::Domain(format!("quadrature rel_tol must lie in (0, 1), got {}", self.rel_tol)));
        }
        if self.max_panels == 0 {
            return Err(Error::Domain("max_panels must be positive".into()));
        }
        Ok(())
    }
}

/// Default Poisson mass allowed outside the series window.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// Index window `[k_lo, k_hi]` of the Szász series at mean `nx`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesTruncation {
    pub k_lo: u64,
    pub k_hi: u64,
    pub tail_tol: f64,
}

impl SeriesTruncation {
    /// Smallest window whose certified lower and upper Poisson tails are each `<= tail_tol / 2`.
    pub fn certify(lambda: f64, tail_tol: f64) -> Result<Self> {
        if !(tail_tol > 0.0) {
            return Err(Error::Domain(format!("tail tolerance must be positive, got {tail_tol}")));
        }
        let half = 0.5 * tail_tol;
        let center = lambda.floor() as u64;

        // Upper cutoff: grow a half-width geometrically, then bisect to the smallest one.
        let mut width = 10 + (10.0 * lambda.sqrt()) as u64;
        while poisson_tail_bound(lambda, center + width)? > half {
            width *= 2;
        }
        let (mut lo, mut hi) = (center, center + width);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if poisson_tail_bound(lambda, mid)? <= half {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let k_hi = hi;

        // Lower cutoff: largest k with P(X < k) certified small.
        let k_lo = if poisson_lower_tail_bound(lambda, center)? > half {
            let (mut lo, mut hi) = (0, center);
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if poisson_lower_tail_bound(lambda, mid)? <= half {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        } else {
            center
        };
        Ok(Self { k_lo, k_hi, tail_tol })
    }

    pub fn len(&self) -> u64 {
        self.k_hi - self.k_lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalResult {
    pub value: f64,
    pub truncation_error_bound: f64,
    pub terms_used: u64,
}

fn check_growth(n: f64, f: &FunctionSpec) -> Result<()> {
    if !(n > 2.0 * f.growth_a) {
        return Err(Error::Precondition(format!(
            "n > 2A required for f in E_A: n = {n}, A = {}",
            f.growth_a
        )));
    }
    Ok(())
}

fn check_x(x: f64) -> Result<()> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("evaluation point x must be nonnegative, got {x}")));
    }
    Ok(())
}

/// `n int_0^inf s_{n,m}(t) f(t) dt = int_0^inf e^{-u} u^m / m! f(u / n) du`.
pub fn inner_integral(n: f64, m: u64, f: &FunctionSpec, q: &QuadratureConfig) -> Result<f64> {
    check_growth(n, f)?;
    q.validate()?;
    inner_integral_unchecked(n, m, f, q, &GaussLegendre::cached(q.points_per_panel))
}

fn inner_integral_unchecked(
    n: f64,
    m: u64,
    f: &FunctionSpec,
    q: &QuadratureConfig,
    rule: &GaussLegendre,
) -> Result<f64> {
    let a = f.growth_a;
    let k = f.growth_k;
    let beta = 1.0 - a / n;
    let shape = m as f64 + 1.0;
    // Integral of the envelope K e^{A u/n} against the Gamma(m+1) density.
    let envelope = k * beta.powf(-shape);
    let target = q.rel_tol * envelope;

    let mean = shape / beta;
    let sd = shape.sqrt() / beta;
    let mut c = 6.0;
    let (lo, hi) = loop {
        let lo = (mean - c * sd).max(0.0);
        let hi = mean + c * sd;
        let upper = envelope * poisson_lower_tail_bound(beta * hi, m + 1)?;
        let lower = if lo > 0.0 {
            k * (a * lo / n).exp() * poisson_tail_bound(lo, m)?
        } else {
            0.0
        };
        if upper + lower <= 0.5 * target {
            break (lo, hi);
        }
        c *= 1.5;
        if c > 1e6 {
            return Err(Error::Quadrature { panels: 0, estimate: upper + lower, target });
        }
    };

    let breaks: Vec<f64> = f.breakpoints().into_iter().map(|t| t * n).collect();
    let integrand = |u: f64| -> Result<f64> {
        let w = log_poisson(m, u).exp();
        if w == 0.0 {
            return Ok(0.0);
        }
        Ok(w * f.eval(u / n)?)
    };
    let r = integrate_panels(rule, lo, hi, &breaks, 0.5 * target, q.max_panels, integrand)?;
    Ok(r.value)
}

/// Certified envelope `2^{1-j} K e^{2Ax}` of `S_{n,j}|f|`, scaled by the window tolerance.
fn truncation_bound(params: OperatorParams, f: &FunctionSpec, x: f64, tail_tol: f64) -> f64 {
    tail_tol * 2f64.powi((1 - params.j) as i32) * f.growth_k * (2.0 * f.growth_a * x).exp()
}

/// `(S_{n,j} f)(x)`: closed-form moments for polynomials, otherwise the truncated series.
pub fn evaluate(
    params: OperatorParams,
    f: &FunctionSpec,
    x: f64,
    q: &QuadratureConfig,
    tail_tol: f64,
) -> Result<EvalResult> {
    check_growth(params.n, f)?;
    check_x(x)?;
    if let Some(p) = f.as_polynomial() {
        return Ok(EvalResult {
            value: polynomial_image(params, p.coeffs_f64().as_slice(), x, 0)?,
            truncation_error_bound: 0.0,
            terms_used: p.coeffs().len() as u64,
        });
    }
    evaluate_series(params, f, x, q, tail_tol)
}

fn polynomial_image(params: OperatorParams, coeffs: &[f64], x: f64, m: u32) -> Result<f64> {
    let mut acc = CompensatedSum::new();
    for (r, a) in coeffs.iter().enumerate() {
        if *a != 0.0 {
            acc.add(a * moment_derivative(params, r as u32, x, m)?);
        }
    }
    Ok(acc.value())
}

/// The series + quadrature path, used for every `f` (including polynomials).
pub fn evaluate_series(
    params: OperatorParams,
    f: &FunctionSpec,
    x: f64,
    q: &QuadratureConfig,
    tail_tol: f64,
) -> Result<EvalResult> {
    check_growth(params.n, f)?;
    check_x(x)?;
    q.validate()?;
    let n = params.n;
    let j = params.j;
    let rule = GaussLegendre::cached(q.points_per_panel);

    if x == 0.0 {
        let value = if j >= 1 { f.eval(0.0)? } else { inner_integral_unchecked(n, (-j) as u64, f, q, &rule)? };
        return Ok(EvalResult { value, truncation_error_bound: 0.0, terms_used: 1 });
    }

    let lambda = n * x;
    let window = SeriesTruncation::certify(lambda, tail_tol)?;

    let mut acc = CompensatedSum::new();
    if j >= 1 {
        let f0 = f.eval(0.0)?;
        let mass: f64 = (0..j as u64).map(|k| log_poisson(k, lambda).exp()).collect::<CompensatedSum>().value();
        acc.add(f0 * mass);
    }

    let first = window.k_lo.max(j.max(0) as u64);
    let terms: Vec<f64> = (first..=window.k_hi)
        .into_par_iter()
        .map(|k| {
            let weight = log_poisson(k, lambda).exp();
            if weight == 0.0 {
                return Ok(0.0);
            }
            let m = (k as i64 - j) as u64;
            Ok(weight * inner_integral_unchecked(n, m, f, q, &rule)?)
        })
        .collect::<Result<Vec<_>>>()?;
    for t in &terms {
        acc.add(*t);
    }

    Ok(EvalResult {
        value: acc.value(),
        truncation_error_bound: truncation_bound(params, f, x, tail_tol),
        terms_used: terms.len() as u64 + if j >= 1 { j as u64 } else { 0 },
    })
}

/// `(S_{n,j} f)^{(m)}(x) = n^m sum_{l=0}^{m} (-1)^{m-l} C(m,l) (S_{n,j-l} f)(x)`.
///
/// Polynomials use the differentiated closed-form moments instead.
pub fn evaluate_derivative(
    params: OperatorParams,
    f: &FunctionSpec,
    x: f64,
    m: u32,
    q: &QuadratureConfig,
    tail_tol: f64,
) -> Result<EvalResult> {
    check_growth(params.n, f)?;
    check_x(x)?;
    if let Some(p) = f.as_polynomial() {
        return Ok(EvalResult {
            value: polynomial_image(params, p.coeffs_f64().as_slice(), x, m)?,
            truncation_error_bound: 0.0,
            terms_used: p.coeffs().len() as u64,
        });
    }
    evaluate_derivative_series(params, f, x, m, q, tail_tol)
}

/// The shifted-parameter combination, always through the series path.
pub fn evaluate_derivative_series(
    params: OperatorParams,
    f: &FunctionSpec,
    x: f64,
    m: u32,
    q: &QuadratureConfig,
    tail_tol: f64,
) -> Result<EvalResult> {
    let mut acc = CompensatedSum::new();
    let mut worst: f64 = 0.0;
    let mut terms = 0;
    for l in 0..=m {
        let r = evaluate_series(params.shifted(-(l as i64)), f, x, q, tail_tol)?;
        let sign = if (m - l).is_multiple_of(2) { 1.0 } else { -1.0 };
        acc.add(sign * big_to_f64(&binomial(m as i64, l)) * r.value);
        worst = worst.max(r.truncation_error_bound);
        terms += r.terms_used;
    }
    let scale = params.n.powi(m as i32);
    Ok(EvalResult {
        value: scale * acc.value(),
        truncation_error_bound: scale * 2f64.powi(m as i32) * worst,
        terms_used: terms,
    })
}

/// Evaluates a grid of `(params, x)` points concurrently; results keep the input order.
pub fn evaluate_batch(
    points: &[(OperatorParams, f64)],
    f: &FunctionSpec,
    q: &QuadratureConfig,
    tail_tol: f64,
) -> Vec<Result<EvalResult>> {
    points
        .par_iter()
        .map(|&(params, x)| evaluate(params, f, x, q, tail_tol))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::Polynomial;

    fn p(n: f64, j: i64) -> OperatorParams {
        OperatorParams::new(n, j).unwrap()
    }

    #[test]
    fn inner_integral_examples() {
        let q = QuadratureConfig::default();
        let one = FunctionSpec::monomial(0);
        assert!((inner_integral(10.0, 7, &one, &q).unwrap() - 1.0).abs() < 1e-12);
        let e1 = FunctionSpec::monomial(1);
        assert!((inner_integral(10.0, 4, &e1, &q).unwrap() - 0.5).abs() < 1e-12);
        let exp2 = FunctionSpec::exp_growth(2.0).unwrap();
        let v = inner_integral(10.0, 3, &exp2, &q).unwrap();
        assert!((v - 2.441_406_25).abs() < 1e-10 * 2.441_406_25, "{v}");
    }

    #[test]
    fn inner_integral_rejects_slow_n() {
        let exp2 = FunctionSpec::exp_growth(2.0).unwrap();
        let err = inner_integral(4.0, 3, &exp2, &QuadratureConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn evaluate_examples() {
        let q = QuadratureConfig::default();
        let r = evaluate(p(50.0, 1), &FunctionSpec::monomial(1), 2.0, &q, DEFAULT_TAIL_TOL).unwrap();
        assert_eq!(r.value, 2.0);
        assert_eq!(r.truncation_error_bound, 0.0);

        let e2 = FunctionSpec::monomial(2);
        let fast = evaluate(p(10.0, 0), &e2, 1.0, &q, DEFAULT_TAIL_TOL).unwrap();
        assert!((fast.value - 1.42).abs() < 1e-14);
        let slow = evaluate_series(p(10.0, 0), &e2, 1.0, &q, DEFAULT_TAIL_TOL).unwrap();
        assert!((slow.value - 1.42).abs() < 1e-8 * 1.42, "{}", slow.value);

        let exp2 = FunctionSpec::exp_growth(2.0).unwrap();
        let err = evaluate(p(3.0, 0), &exp2, 1.0, &q, DEFAULT_TAIL_TOL).unwrap_err();
        assert!(err.to_string().contains("n > 2A"));
    }

    #[test]
    fn interpolates_at_zero_for_positive_j() {
        let q = QuadratureConfig::default();
        let g = FunctionSpec::parse_expression("cos(x) + 2", 0.0, 3.0).unwrap();
        let r = evaluate(p(20.0, 4), &g, 0.0, &q, DEFAULT_TAIL_TOL).unwrap();
        assert_eq!(r.value, 3.0);
    }

    #[test]
    fn derivative_examples() {
        let q = QuadratureConfig::default();
        let e2 = FunctionSpec::monomial(2);
        let d = evaluate_derivative(p(10.0, 0), &e2, 1.0, 1, &q, DEFAULT_TAIL_TOL).unwrap();
        assert!((d.value - 2.4).abs() < 1e-13);
        let d = evaluate_derivative(p(25.0, 2), &e2, 1.5, 1, &q, DEFAULT_TAIL_TOL).unwrap();
        assert!((d.value - 3.0).abs() < 1e-13);
        let s = evaluate_derivative_series(p(10.0, 0), &e2, 1.0, 1, &q, DEFAULT_TAIL_TOL).unwrap();
        assert!((s.value - 2.4).abs() < 1e-7, "{}", s.value);
        let f = FunctionSpec::parse_expression("sin(x)", 0.0, 1.0).unwrap();
        let a = evaluate_derivative(p(10.0, 1), &f, 0.8, 0, &q, DEFAULT_TAIL_TOL).unwrap();
        let b = evaluate(p(10.0, 1), &f, 0.8, &q, DEFAULT_TAIL_TOL).unwrap();
        assert_eq!(a.value, b.value);
    }

    #[test]
    fn window_is_certified() {
        for &lambda in &[0.3, 2.0, 40.0, 900.0] {
            let w = SeriesTruncation::certify(lambda, 1e-12).unwrap();
            let outside: f64 = (0..w.k_lo).chain(w.k_hi + 1..w.k_hi + 2000)
                .map(|k| log_poisson(k, lambda).exp())
                .sum();
            assert!(outside <= 1e-12, "{lambda}: {outside}");
            assert!(w.k_lo as f64 <= lambda && w.k_hi as f64 >= lambda);
        }
    }

    #[test]
    fn batch_matches_pointwise() {
        let q = QuadratureConfig::default();
        let f = FunctionSpec::polynomial(Polynomial::from_ints(&[1, 0, 3]));
        let pts = [(p(5.0, 0), 0.5), (p(20.0, 3), 1.0), (p(7.5, -2), 2.0)];
        let batch = evaluate_batch(&pts, &f, &q, DEFAULT_TAIL_TOL);
        for ((params, x), r) in pts.iter().zip(batch) {
            assert_eq!(r.unwrap(), evaluate(*params, &f, *x, &q, DEFAULT_TAIL_TOL).unwrap());
        }
    }
}
