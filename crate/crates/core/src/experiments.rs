//! Empirical checks of the approximation theorems: convergence against the modulus
//! bound, order fits of expansion remainders, and exponential decay under localization.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use crate::diffop::simultaneous_coefficient;
use crate::error::{Error, Result};
use crate::fexpr::FunctionSpec;
use crate::moments::OperatorParams;
use crate::numerics::log_poisson;
use crate::operator::{evaluate, evaluate_derivative, EvalResult, QuadratureConfig, DEFAULT_TAIL_TOL};

/// Numerical knobs shared by all experiments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExperimentSettings {
    pub quad: QuadratureConfig,
    pub tail_tol: f64,
    /// Minimum grid size for modulus estimates; refined so the spacing stays below delta/64.
    pub modulus_grid_points: usize,
    /// Relative tolerance for `n^{q+1} R_q(n) -> c_{q+1}` at the largest usable `n`.
    pub stabilization_tol: f64,
    /// Allowed excess of the fitted remainder slope over `-(q+1)`.
    pub slope_slack: f64,
    pub min_r_squared: f64,
}

impl Default for ExperimentSettings {
    fn default() -> Self {
        Self {
            quad: QuadratureConfig::default(),
            tail_tol: DEFAULT_TAIL_TOL,
            modulus_grid_points: 2001,
            stabilization_tol: 0.05,
            slope_slack: 0.2,
            min_r_squared: 0.99,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReportRow {
    pub n: f64,
    pub value: f64,
    pub reference: f64,
    pub error: f64,
    pub bound: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub criterion: String,
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    fn new(criterion: &str, pass: bool, detail: String) -> Self {
        Self { criterion: criterion.to_string(), pass, detail }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub function: String,
    pub j: i64,
    pub x: f64,
    pub rows: Vec<ReportRow>,
    pub fit: Option<Fit>,
    /// Localization only: `-slope` of `ln value` against `n`.
    pub decay_constant: Option<f64>,
    pub verdicts: Vec<Verdict>,
}

impl ExperimentReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn verdict(&self, criterion: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.criterion == criterion)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModulusEstimate {
    pub delta: f64,
    pub window: (f64, f64),
    pub value: f64,
    pub grid_points: usize,
}

/// Samples `f` on `grid_points` equispaced points of `window`.
fn sample(f: &FunctionSpec, window: (f64, f64), grid_points: usize) -> Result<Vec<f64>> {
    let (lo, hi) = window;
    let h = (hi - lo) / (grid_points - 1) as f64;
    (0..grid_points).map(|i| f.eval(lo + i as f64 * h)).collect()
}

/// Largest `max - min` over all runs of `span + 1` consecutive samples (sliding-window
/// extrema), i.e. the largest `|f(t1) - f(t2)|` over grid pairs at most `span` steps apart.
fn max_oscillation(values: &[f64], span: usize) -> f64 {
    let mut maxq: VecDeque<usize> = VecDeque::new();
    let mut minq: VecDeque<usize> = VecDeque::new();
    let mut best: f64 = 0.0;
    for (i, &v) in values.iter().enumerate() {
        while maxq.back().is_some_and(|&b| values[b] <= v) {
            maxq.pop_back();
        }
        maxq.push_back(i);
        while minq.back().is_some_and(|&b| values[b] >= v) {
            minq.pop_back();
        }
        minq.push_back(i);
        let start = i.saturating_sub(span);
        while maxq.front().is_some_and(|&f| f < start) {
            maxq.pop_front();
        }
        while minq.front().is_some_and(|&f| f < start) {
            minq.pop_front();
        }
        best = best.max(values[maxq[0]] - values[minq[0]]);
    }
    best
}

fn check_window(window: (f64, f64), grid_points: usize) -> Result<()> {
    let (lo, hi) = window;
    if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::Domain(format!("modulus window [{lo}, {hi}] must be a nonempty subset of [0, inf)")));
    }
    if grid_points < 100 {
        return Err(Error::Domain(format!("modulus estimate needs at least 100 grid points, got {grid_points}")));
    }
    Ok(())
}

fn grid_span(window: (f64, f64), grid_points: usize, delta: f64) -> usize {
    let h = (window.1 - window.0) / (grid_points - 1) as f64;
    // Tolerate representation error in delta / h.
    (delta / h * (1.0 + 1e-12)).floor() as usize
}

/// Grid lower estimate of `omega(f, delta) = sup_{|t1 - t2| <= delta} |f(t1) - f(t2)|` on `window`.
pub fn estimate_modulus(
    f: &FunctionSpec,
    delta: f64,
    window: (f64, f64),
    grid_points: usize,
) -> Result<ModulusEstimate> {
    if !(delta > 0.0) {
        return Err(Error::Domain(format!("modulus step delta must be positive, got {delta}")));
    }
    check_window(window, grid_points)?;
    let values = sample(f, window, grid_points)?;
    let span = grid_span(window, grid_points, delta);
    Ok(ModulusEstimate { delta, window, value: max_oscillation(&values, span), grid_points })
}

/// Least-squares line `y = slope x + intercept` with its coefficient of determination.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<Fit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::DegenerateFit(format!("need matching samples, got {} and {}", xs.len(), ys.len())));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0) };
    Ok(Fit { slope, intercept, r_squared })
}

/// Fits `ln(error) = slope ln(n) + intercept`; the slope estimates `-q` in `O(n^{-q})`.
pub fn order_fit(rows: &[(f64, f64)]) -> Result<Fit> {
    if rows.len() < 4 {
        return Err(Error::DegenerateFit(format!("order fit needs at least 4 rows, got {}", rows.len())));
    }
    if let Some((n, e)) = rows.iter().find(|(n, e)| !(*e > 0.0) || !(*n > 0.0)) {
        return Err(Error::DegenerateFit(format!("nonpositive entry at n = {n}: error = {e}")));
    }
    let xs: Vec<f64> = rows.iter().map(|(n, _)| n.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|(_, e)| e.ln()).collect();
    linear_fit(&xs, &ys)
}

fn sorted_grid(n_grid: &[f64]) -> Result<Vec<f64>> {
    if n_grid.is_empty() {
        return Err(Error::Domain("empty n grid".into()));
    }
    let mut grid = n_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    Ok(grid)
}

fn evaluate_grid(
    f: &FunctionSpec,
    j: i64,
    x: f64,
    grid: &[f64],
    s: &ExperimentSettings,
) -> Result<Vec<EvalResult>> {
    grid.par_iter()
        .map(|&n| evaluate(OperatorParams::new(n, j)?, f, x, &s.quad, s.tail_tol))
        .collect()
}

/// Level below which a computed value carries no signal: truncation bound and roundoff.
fn noise_floor(r: &EvalResult) -> f64 {
    r.truncation_error_bound + 100.0 * f64::EPSILON * r.value.abs().max(1.0)
}

/// Scale of the exponentially small boundary contribution `P(X < j)`, `X ~ Poisson(nx)`, that
/// lies beyond every order of the expansion; multiplied by `n^m 2^m (|f(0)| + K)`.
fn boundary_floor(f: &FunctionSpec, j: i64, n: f64, x: f64, m: u32) -> Result<f64> {
    if j < 1 {
        return Ok(0.0);
    }
    let lambda = n * x;
    let mass: f64 = (0..j as u64).map(|k| log_poisson(k, lambda).exp()).sum();
    Ok(mass * (2.0 * n).powi(m as i32) * (f.eval(0.0)?.abs() + f.growth_k))
}

/// Compares `|S_{n,j} f(x) - f(x)|` with `(1 + sqrt(2x + (j-1)(j-2)/n)) omega(f, 1/sqrt(n))`.
pub fn converge_report(
    f: &FunctionSpec,
    j: i64,
    x: f64,
    n_grid: &[f64],
    s: &ExperimentSettings,
) -> Result<ExperimentReport> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("convergence report needs x > 0, got {x}")));
    }
    let grid = sorted_grid(n_grid)?;
    let n_min = grid[0];
    let n_max = grid[grid.len() - 1];
    let window = ((x - 8.0).max(0.0), x + 8.0 + 4.0 / n_min.sqrt());
    let finest_delta = 1.0 / n_max.sqrt();
    let needed = ((window.1 - window.0) / (finest_delta / 64.0)).ceil() as usize + 1;
    let grid_points = s.modulus_grid_points.max(needed);
    check_window(window, grid_points)?;
    let samples = sample(f, window, grid_points)?;

    let target = f.eval(x)?;
    let evals = evaluate_grid(f, j, x, &grid, s)?;
    let mut rows = Vec::with_capacity(grid.len());
    let mut all_ok = true;
    let mut worst_ratio: f64 = 0.0;
    for (&n, r) in grid.iter().zip(&evals) {
        let omega = max_oscillation(&samples, grid_span(window, grid_points, 1.0 / n.sqrt()));
        let jf = j as f64;
        let factor = 1.0 + (2.0 * x + (jf - 1.0) * (jf - 2.0) / n).sqrt();
        let bound = factor * omega;
        let error = (r.value - target).abs();
        if error > bound * (1.0 + 1e-6) + 10.0 * r.truncation_error_bound {
            all_ok = false;
        }
        if bound > 0.0 {
            worst_ratio = worst_ratio.max(error / bound);
        }
        rows.push(ReportRow { n, value: r.value, reference: target, error, bound: Some(bound) });
    }

    let fit_rows: Vec<(f64, f64)> = rows.iter().filter(|r| r.error > 0.0).map(|r| (r.n, r.error)).collect();
    let fit = order_fit(&fit_rows).ok();
    Ok(ExperimentReport {
        experiment: "converge".into(),
        function: f.to_string(),
        j,
        x,
        rows,
        fit,
        decay_constant: None,
        verdicts: vec![Verdict::new(
            "error_within_modulus_bound",
            all_ok,
            format!("max error/bound = {worst_ratio:.6}"),
        )],
    })
}

/// Expansion coefficients `c_{0,j}(f,x), ..., c_{count-1,j}(f,x)`.
pub fn expansion_coefficients(f: &FunctionSpec, j: i64, x: f64, count: usize) -> Result<Vec<f64>> {
    simultaneous_coefficients(f, j, x, 0, count)
}

/// Coefficients `c^{(m)}_{k,j}(f,x)` for `k < count` of the expansion of `(S_{n,j} f)^{(m)}(x)`.
pub fn simultaneous_coefficients(f: &FunctionSpec, j: i64, x: f64, m: usize, count: usize) -> Result<Vec<f64>> {
    (0..count)
        .map(|k| {
            let derivs = f.derivatives(x, k + m, k + 1)?;
            Ok(simultaneous_coefficient(j, k, m, &derivs, x)?.value)
        })
        .collect()
}

/// Remainder `R_q(n) = S_{n,j} f(x) - sum_{k<=q} c_{k,j}(f,x) n^{-k}` along `n_grid`; the fitted
/// slope of `|R_q|` must not exceed `-(q+1) + slope_slack`, and `n^{q+1} R_q(n)` must approach
/// `c_{q+1,j}(f,x)` within `stabilization_tol`. Rows within 10x of the noise floor are not fitted.
pub fn voronovskaja_fit(
    f: &FunctionSpec,
    j: i64,
    x: f64,
    q: usize,
    n_grid: &[f64],
    s: &ExperimentSettings,
) -> Result<ExperimentReport> {
    expansion_fit(f, j, x, 0, q, n_grid, s)
}

/// As [`voronovskaja_fit`] for the m-th derivative, against the coefficients `c^{(m)}_{k,j}`.
pub fn simultaneous_fit(
    f: &FunctionSpec,
    j: i64,
    x: f64,
    m: u32,
    q: usize,
    n_grid: &[f64],
    s: &ExperimentSettings,
) -> Result<ExperimentReport> {
    expansion_fit(f, j, x, m, q, n_grid, s)
}

fn expansion_fit(
    f: &FunctionSpec,
    j: i64,
    x: f64,
    m: u32,
    q: usize,
    n_grid: &[f64],
    s: &ExperimentSettings,
) -> Result<ExperimentReport> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("expansion fit needs x > 0, got {x}")));
    }
    let grid = sorted_grid(n_grid)?;
    let coeffs = simultaneous_coefficients(f, j, x, m as usize, q + 2)?;
    let evals: Vec<EvalResult> = grid
        .par_iter()
        .map(|&n| evaluate_derivative(OperatorParams::new(n, j)?, f, x, m, &s.quad, s.tail_tol))
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(grid.len());
    let mut usable = Vec::new();
    for (&n, r) in grid.iter().zip(&evals) {
        let reference: f64 = coeffs[..=q].iter().enumerate().map(|(k, c)| c * n.powi(-(k as i32))).sum();
        let signed = r.value - reference;
        let error = signed.abs();
        let floor = noise_floor(r) + boundary_floor(f, j, n, x, m)?;
        if error > 10.0 * floor {
            usable.push((n, signed));
        }
        rows.push(ReportRow { n, value: r.value, reference, error, bound: Some(floor) });
    }

    let order = (q + 1) as f64;
    let mut verdicts = Vec::new();
    let mut fit = None;
    if usable.is_empty() {
        verdicts.push(Verdict::new(
            "remainder_order",
            true,
            "remainder at the noise floor for every n (expansion is exact)".into(),
        ));
    } else if usable.len() < 4 {
        verdicts.push(Verdict::new(
            "remainder_order",
            false,
            format!("only {} rows above the noise floor", usable.len()),
        ));
    } else {
        let pts: Vec<(f64, f64)> = usable.iter().map(|&(n, e)| (n, e.abs())).collect();
        let fitted = order_fit(&pts)?;
        let limit = -order + s.slope_slack;
        verdicts.push(Verdict::new(
            "remainder_order",
            fitted.slope <= limit,
            format!("slope {:.4} (required <= {limit:.2})", fitted.slope),
        ));
        fit = Some(fitted);

        let next = coeffs[q + 1];
        let (n_last, r_last) = usable[usable.len() - 1];
        let scaled = n_last.powf(order) * r_last;
        if f.is_smooth() && next != 0.0 {
            let rel = (scaled - next).abs() / next.abs();
            verdicts.push(Verdict::new(
                "next_coefficient_limit",
                rel <= s.stabilization_tol,
                format!("n^{}R at n = {n_last}: {scaled:.8e} vs c_{} = {next:.8e} (rel {rel:.3e})", q + 1, q + 1),
            ));
        }
    }

    Ok(ExperimentReport {
        experiment: if m == 0 { "voronovskaja".into() } else { "simultaneous".into() },
        function: f.to_string(),
        j,
        x,
        rows,
        fit,
        decay_constant: None,
        verdicts,
    })
}

/// `|S_{n,j} f(x)|` for `f = g` with `(x - delta, x + delta)` cut out; must decay like
/// `e^{-c n}`, tested by a linear fit of `ln value` against `n`.
pub fn localization_probe(
    g: &FunctionSpec,
    x: f64,
    delta: f64,
    j: i64,
    n_grid: &[f64],
    s: &ExperimentSettings,
) -> Result<ExperimentReport> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("localization probe needs x > 0, got {x}")));
    }
    let f = FunctionSpec::excised(g.clone(), x, delta)?;
    let grid = sorted_grid(n_grid)?;
    let evals = evaluate_grid(&f, j, x, &grid, s)?;

    let mut rows = Vec::with_capacity(grid.len());
    let mut usable = Vec::new();
    for (&n, r) in grid.iter().zip(&evals) {
        let value = r.value.abs();
        let floor = 10.0 * r.truncation_error_bound;
        if value > floor {
            usable.push((n, value));
        }
        rows.push(ReportRow { n, value, reference: 0.0, error: value, bound: Some(floor) });
    }

    let mut verdicts = Vec::new();
    let mut fit = None;
    let mut decay_constant = None;
    if usable.is_empty() {
        verdicts.push(Verdict::new("exponential_decay", true, "decayed below floor".into()));
    } else if usable.len() < 4 {
        verdicts.push(Verdict::new(
            "exponential_decay",
            false,
            format!("only {} rows above the truncation floor", usable.len()),
        ));
    } else {
        let ns: Vec<f64> = usable.iter().map(|(n, _)| *n).collect();
        let logs: Vec<f64> = usable.iter().map(|(_, v)| v.ln()).collect();
        let fitted = linear_fit(&ns, &logs)?;
        let pass = fitted.slope < 0.0 && fitted.r_squared >= s.min_r_squared;
        verdicts.push(Verdict::new(
            "exponential_decay",
            pass,
            format!("slope {:.6e}, r^2 {:.6}", fitted.slope, fitted.r_squared),
        ));
        decay_constant = Some(-fitted.slope);
        fit = Some(fitted);
    }

    Ok(ExperimentReport {
        experiment: "localize".into(),
        function: f.to_string(),
        j,
        x,
        rows,
        fit,
        decay_constant,
        verdicts,
    })
}
