use std::fmt;

use crate::diffop::Polynomial;
use crate::error::{Error, Result};

use super::{differentiate, parse, Expr};

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionBody {
    /// Exact coefficients together with their binary64 roundings for fast evaluation.
    Polynomial { exact: Polynomial, coeffs: Vec<f64> },
    Expression(Expr),
    /// `inner` forced to zero on the open window `(center - delta, center + delta)`.
    Excised {
        inner: Box<FunctionSpec>,
        center: f64,
        delta: f64,
    },
    /// `t -> e^{A t}`.
    ExpGrowth { a: f64 },
}

/// A function `f` on `[0, inf)` together with growth constants `A`, `K` such that
/// `|f(t)| <= K e^{A t}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSpec {
    pub body: FunctionBody,
    pub growth_a: f64,
    pub growth_k: f64,
}

fn check_growth(a: f64, k: f64) -> Result<()> {
    if !(a >= 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!("growth constant A must be nonnegative, got {a}")));
    }
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::Domain(format!("growth constant K must be positive, got {k}")));
    }
    Ok(())
}

impl FunctionSpec {
    /// Polynomial `f`; growth constants from `t^r <= r! e^t`, i.e. `A = 1` and
    /// `K = sum |a_r| r!` (constants get `A = 0`).
    pub fn polynomial(p: Polynomial) -> Self {
        let coeffs = p.coeffs_f64();
        let mut fact = 1.0;
        let mut k = 0.0;
        for (r, c) in coeffs.iter().enumerate() {
            if r > 0 {
                fact *= r as f64;
            }
            k += c.abs() * fact;
        }
        let growth_a = if coeffs.len() > 1 { 1.0 } else { 0.0 };
        let growth_k = if k > 0.0 { k } else { 1.0 };
        Self { body: FunctionBody::Polynomial { exact: p, coeffs }, growth_a, growth_k }
    }

    pub fn monomial(r: usize) -> Self {
        Self::polynomial(Polynomial::monomial(r))
    }

    /// `e^{A t}` with `K = 1`.
    pub fn exp_growth(a: f64) -> Result<Self> {
        check_growth(a, 1.0)?;
        Ok(Self { body: FunctionBody::ExpGrowth { a }, growth_a: a, growth_k: 1.0 })
    }

    /// A parsed expression with user-declared growth constants.
    pub fn expression(e: Expr, growth_a: f64, growth_k: f64) -> Result<Self> {
        check_growth(growth_a, growth_k)?;
        Ok(Self { body: FunctionBody::Expression(e), growth_a, growth_k })
    }

    pub fn parse_expression(text: &str, growth_a: f64, growth_k: f64) -> Result<Self> {
        Self::expression(parse(text)?, growth_a, growth_k)
    }

    /// `inner` with the window `(center - delta, center + delta)` cut out.
    pub fn excised(inner: FunctionSpec, center: f64, delta: f64) -> Result<Self> {
        if !(delta > 0.0) || !center.is_finite() {
            return Err(Error::Domain(format!(
                "excision window needs finite center and positive delta, got ({center}, {delta})"
            )));
        }
        let (growth_a, growth_k) = (inner.growth_a, inner.growth_k);
        Ok(Self {
            body: FunctionBody::Excised { inner: Box::new(inner), center, delta },
            growth_a,
            growth_k,
        })
    }

    /// Parses `poly:a0,a1,...`, `expA:A`, or an expression (which takes the given growth constants).
    pub fn from_spec_str(text: &str, growth_a: f64, growth_k: f64) -> Result<Self> {
        let text = text.trim();
        if let Some(rest) = text.strip_prefix("poly:") {
            let coeffs = rest
                .split(',')
                .map(|c| {
                    c.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Domain(format!("bad polynomial coefficient `{c}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(Self::polynomial(Polynomial::from_f64(&coeffs)?));
        }
        if let Some(rest) = text.strip_prefix("expA:") {
            let a = rest
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::Domain(format!("bad exponential rate `{rest}`")))?;
            return Self::exp_growth(a);
        }
        Self::parse_expression(text, growth_a, growth_k)
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        match &self.body {
            FunctionBody::Polynomial { exact, .. } => Some(exact),
            _ => None,
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        match &self.body {
            FunctionBody::Polynomial { coeffs, .. } => Ok(coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)),
            FunctionBody::Expression(e) => e.eval(t),
            FunctionBody::Excised { inner, center, delta } => {
                if (t - center).abs() < *delta {
                    Ok(0.0)
                } else {
                    inner.eval(t)
                }
            }
            FunctionBody::ExpGrowth { a } => Ok((a * t).exp()),
        }
    }

    /// Values `f^{(from)}(t), ..., f^{(from + count - 1)}(t)`.
    pub fn derivatives(&self, t: f64, from: usize, count: usize) -> Result<Vec<f64>> {
        match &self.body {
            FunctionBody::Polynomial { exact, .. } => {
                Ok((from..from + count).map(|d| exact.differentiate(d).eval(t)).collect())
            }
            FunctionBody::Expression(e) => {
                let mut cur = differentiate(e, from)?;
                let mut out = Vec::with_capacity(count);
                for i in 0..count {
                    if i > 0 {
                        cur = differentiate(&cur, 1)?;
                    }
                    out.push(cur.eval(t)?);
                }
                Ok(out)
            }
            FunctionBody::Excised { inner, center, delta } => {
                let gap = (t - center).abs();
                if gap < *delta {
                    Ok(vec![0.0; count])
                } else if gap > *delta {
                    inner.derivatives(t, from, count)
                } else {
                    Err(Error::NotDifferentiable(format!(
                        "excised function at the window edge t = {t}"
                    )))
                }
            }
            FunctionBody::ExpGrowth { a } => {
                let base = (a * t).exp();
                Ok((from..from + count).map(|d| a.powi(d as i32) * base).collect())
            }
        }
    }

    pub fn derivative_at(&self, t: f64, order: usize) -> Result<f64> {
        Ok(self.derivatives(t, order, 1)?[0])
    }

    /// Points in `[0, inf)` where `f` may jump or have a kink.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts = match &self.body {
            FunctionBody::Polynomial { .. } | FunctionBody::ExpGrowth { .. } => Vec::new(),
            FunctionBody::Expression(e) => e.kinks(),
            FunctionBody::Excised { inner, center, delta } => {
                let mut v = inner.breakpoints();
                v.push(center - delta);
                v.push(center + delta);
                v
            }
        };
        pts.retain(|t| t.is_finite() && *t > 0.0);
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// Whether the body admits derivatives of every order at smooth points.
    pub fn is_smooth(&self) -> bool {
        match &self.body {
            FunctionBody::Expression(e) => !e.contains_abs(),
            FunctionBody::Excised { inner, .. } => inner.is_smooth(),
            _ => true,
        }
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.body {
            FunctionBody::Polynomial { exact, .. } => write!(f, "{exact}"),
            FunctionBody::Expression(e) => write!(f, "{e}"),
            FunctionBody::Excised { inner, center, delta } => {
                write!(f, "excise({inner}; |x - {center}| < {delta})")
            }
            FunctionBody::ExpGrowth { a } => write!(f, "exp({a}*x)"),
        }
    }
}
