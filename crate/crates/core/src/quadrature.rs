//! Gauss–Legendre rules and adaptive panel integration on a finite interval.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Rule with `order` points on `[-1, 1]`, nodes found by Newton iteration on the
    /// three-term Legendre recurrence.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let n = order as f64;
        for i in 0..order.div_ceil(2) {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, z);
                for k in 2..=order {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                let p = if order == 1 { z } else { p1 };
                let prev = if order == 1 { 1.0 } else { p0 };
                dp = n * (z * p - prev) / (z * z - 1.0);
                let dz = p / dp;
                z -= dz;
                if dz.abs() <= 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = -z;
            nodes[order - 1 - i] = z;
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Shared instance per order.
    pub fn cached(order: usize) -> Arc<Self> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        guard.entry(order).or_insert_with(|| Arc::new(Self::new(order))).clone()
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F>(&self, a: f64, b: f64, mut f: F) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x)?;
        }
        Ok(acc * half)
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error_estimate: f64,
    pub panels: usize,
}

/// Integrates `f` over `[a, b]`, with the interval first split at `breaks`, then refined by
/// bisecting the panel with the largest error estimate (one rule versus the sum over its
/// two halves) until the total estimate is below `abs_tol`.
pub fn integrate_panels<F>(
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    breaks: &[f64],
    abs_tol: f64,
    max_panels: usize,
    f: F,
) -> Result<Integral>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut edges = vec![a];
    edges.extend(breaks.iter().copied().filter(|&t| t > a && t < b));
    edges.push(b);

    let eval = |lo: f64, hi: f64| -> Result<Panel> {
        let mid = 0.5 * (lo + hi);
        let coarse = rule.integrate(lo, hi, &f)?;
        let fine = rule.integrate(lo, mid, &f)? + rule.integrate(mid, hi, &f)?;
        Ok(Panel { a: lo, b: hi, value: fine, error: (fine - coarse).abs() })
    };

    let mut panels = edges
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| eval(w[0], w[1]))
        .collect::<Result<Vec<_>>>()?;

    loop {
        let total_err: f64 = panels.iter().map(|p| p.error).sum();
        if total_err <= abs_tol {
            let value = crate::numerics::compensated_sum(panels.iter().map(|p| p.value));
            return Ok(Integral { value, error_estimate: total_err, panels: panels.len() });
        }
        if panels.len() >= max_panels {
            return Err(Error::Quadrature { panels: panels.len(), estimate: total_err, target: abs_tol });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("at least one panel");
        let p = panels[worst];
        let mid = 0.5 * (p.a + p.b);
        if !(mid > p.a && mid < p.b) {
            return Err(Error::Quadrature { panels: panels.len(), estimate: total_err, target: abs_tol });
        }
        panels[worst] = eval(p.a, mid)?;
        panels.insert(worst + 1, eval(mid, p.b)?);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        for order in [1, 2, 5, 16, 32] {
            let rule = GaussLegendre::new(order);
            let deg = 2 * order - 1;
            let got = rule.integrate(0.0, 2.0, |x| Ok(x.powi(deg as i32))).unwrap();
            let exact = 2f64.powi(deg as i32 + 1) / (deg as f64 + 1.0);
            assert!((got - exact).abs() <= 1e-13 * exact, "order {order}: {got} vs {exact}");
            let wsum: f64 = rule.weights().iter().sum();
            assert!((wsum - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn adaptive_handles_kink_at_breakpoint() {
        let rule = GaussLegendre::new(8);
        let r = integrate_panels(&rule, 0.0, 3.0, &[1.0], 1e-14, 8, |t| Ok((t - 1.0).abs())).unwrap();
        assert!((r.value - 2.5).abs() < 1e-14);
    }

    #[test]
    fn adaptive_refines_peaked_integrand() {
        let rule = GaussLegendre::new(16);
        let r = integrate_panels(&rule, -20.0, 20.0, &[], 1e-13, 64, |t| Ok((-t * t).exp())).unwrap();
        assert!((r.value - std::f64::consts::PI.sqrt()).abs() < 1e-13);
        assert!(r.panels > 1);
    }

    #[test]
    fn reports_non_convergence() {
        let rule = GaussLegendre::new(2);
        let r = integrate_panels(&rule, 0.0, 1.0, &[], 1e-15, 4, |t| Ok(t.sqrt()));
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }
}
