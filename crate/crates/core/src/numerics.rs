//! Scalar kernels: the Szász basis in log space, exact falling factorials and
//! binomials, certified Poisson tail bounds, and compensated summation.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `ln(k!) - ((k + 1/2) ln k - k + ln sqrt(2 pi))` for k = 0..=15 (entry 0 unused).
const STIRLING_ERR: [f64; 16] = [
    0.0,
    0.081_061_466_795_327_26,
    0.041_340_695_955_409_29,
    0.027_677_925_684_998_34,
    0.020_790_672_103_765_09,
    0.016_644_691_189_821_19,
    0.013_876_128_823_070_75,
    0.011_896_709_945_891_77,
    0.010_411_265_261_972_1,
    0.009_255_462_182_712_733,
    0.008_330_563_433_362_87,
    0.007_573_675_487_951_841,
    0.006_942_840_107_209_53,
    0.006_408_994_188_004_207,
    0.005_951_370_112_758_848,
    0.005_554_733_551_962_801,
];

fn stirling_err(k: u64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    if k < 16 {
        return STIRLING_ERR[k as usize];
    }
    let n = k as f64;
    let nn = n * n;
    if k > 500 {
        (S0 - S1 / nn) / n
    } else if k > 80 {
        (S0 - (S1 - S2 / nn) / nn) / n
    } else if k > 35 {
        (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / n
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / n
    }
}

/// Deviance term `k ln(k/lambda) + lambda - k`, evaluated without cancellation
/// when `k` is close to `lambda`.
fn deviance(k: f64, lambda: f64) -> f64 {
    if (k - lambda).abs() < 0.1 * (k + lambda) {
        let v = (k - lambda) / (k + lambda);
        let mut s = (k - lambda) * v;
        let mut ej = 2.0 * k * v;
        let v2 = v * v;
        for i in 1..1000 {
            ej *= v2;
            let s1 = s + ej / (2 * i + 1) as f64;
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        s
    } else {
        k * (k / lambda).ln() + lambda - k
    }
}

/// `ln s_{n,k}(x) = k ln(nx) - ln k! - nx`.
///
/// Computed through the saddle-point form `-ln sqrt(2 pi k) - stirling_err(k) - deviance(k, nx)`
/// so that `exp` of the result carries only a few ulps of relative error even when
/// `k` and `nx` are large. Returns `-inf` for `x = 0, k > 0`.
pub fn log_basis(n: f64, k: u64, x: f64) -> Result<f64> {
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::Domain(format!("basis index n must be positive, got {n}")));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("evaluation point x must be nonnegative, got {x}")));
    }
    Ok(log_poisson(k, n * x))
}

/// `ln(e^{-lambda} lambda^k / k!)` for `lambda >= 0`.
pub(crate) fn log_poisson(k: u64, lambda: f64) -> f64 {
    if lambda == 0.0 {
        return if k == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    if k == 0 {
        return -lambda;
    }
    let kf = k as f64;
    -LN_SQRT_2PI - 0.5 * kf.ln() - stirling_err(k) - deviance(kf, lambda)
}

/// A validated triple `(n, k, x)` at which the Szász basis is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisPoint {
    pub n: f64,
    pub k: u64,
    pub x: f64,
}

impl BasisPoint {
    pub fn new(n: f64, k: u64, x: f64) -> Result<Self> {
        log_basis(n, k, x)?;
        Ok(Self { n, k, x })
    }

    pub fn ln_value(&self) -> f64 {
        log_poisson(self.k, self.n * self.x)
    }

    pub fn value(&self) -> f64 {
        self.ln_value().exp()
    }
}

/// Falling factorial `a (a-1) ... (a-k+1)`, exact.
///
/// Runs in `i128` and switches to big integers once a product would overflow.
pub fn falling_factorial(a: i64, k: u32) -> BigInt {
    let mut acc: i128 = 1;
    for i in 0..k {
        let factor = a as i128 - i as i128;
        if factor == 0 {
            return BigInt::zero();
        }
        match acc.checked_mul(factor) {
            Some(v) => acc = v,
            None => {
                let mut big = BigInt::from(acc);
                for i2 in i..k {
                    big *= BigInt::from(a as i128 - i2 as i128);
                }
                return big;
            }
        }
    }
    BigInt::from(acc)
}

pub fn falling_factorial_f64(a: i64, k: u32) -> f64 {
    big_to_f64(&falling_factorial(a, k))
}

/// Generalized binomial coefficient `C(a, b) = a^(b falling) / b!` for any integer `a`.
pub fn binomial(a: i64, b: u32) -> BigInt {
    falling_factorial(a, b) / factorial(b)
}

pub fn factorial(k: u32) -> BigInt {
    (1..=k as u64).fold(BigInt::one(), |acc, i| acc * i)
}

pub(crate) fn big_to_f64(v: &BigInt) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// Natural log of the Chernoff bound `e^{-lambda} (e lambda / K)^K`.
fn ln_chernoff(lambda: f64, cutoff: u64) -> f64 {
    if cutoff == 0 {
        return -lambda;
    }
    let k = cutoff as f64;
    -lambda + k * (1.0 + lambda.ln() - k.ln())
}

/// Certified upper bound on the Poisson upper tail `P(X > cutoff)`, `X ~ Pois(lambda)`.
///
/// Uses `e^{-lambda} (e lambda / K)^K` for `K > lambda` and the trivial bound 1 otherwise.
pub fn poisson_tail_bound(lambda: f64, cutoff: u64) -> Result<f64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!("Poisson mean must be positive, got {lambda}")));
    }
    if (cutoff as f64) <= lambda {
        return Ok(1.0);
    }
    Ok(ln_chernoff(lambda, cutoff).exp().min(1.0))
}

/// Certified upper bound on the Poisson lower tail `P(X < cutoff)`.
///
/// For `cutoff < lambda` the event is contained in `{X <= cutoff}`, whose Chernoff bound
/// has the same form as the upper one.
pub fn poisson_lower_tail_bound(lambda: f64, cutoff: u64) -> Result<f64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!("Poisson mean must be positive, got {lambda}")));
    }
    if cutoff == 0 {
        return Ok(0.0);
    }
    if (cutoff as f64) >= lambda {
        return Ok(1.0);
    }
    Ok(ln_chernoff(lambda, cutoff).exp().min(1.0))
}

/// A cutoff together with its certified upper-tail bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailBound {
    pub lambda: f64,
    pub cutoff: u64,
    pub bound: f64,
}

impl TailBound {
    /// Smallest cutoff `K >= ceil(lambda)` whose certified tail bound is `<= tol`.
    pub fn certified(lambda: f64, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::Domain(format!("tail tolerance must be positive, got {tol}")));
        }
        let mut cutoff = lambda.ceil() as u64 + 1;
        let mut bound = poisson_tail_bound(lambda, cutoff)?;
        let mut step = 1 + (lambda.sqrt() as u64);
        // Coarse doubling, then bisection back to the smallest admissible cutoff.
        while bound > tol {
            cutoff += step;
            step *= 2;
            bound = poisson_tail_bound(lambda, cutoff)?;
        }
        let (mut lo, mut hi) = (lambda.ceil() as u64, cutoff);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if poisson_tail_bound(lambda, mid)? <= tol {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(Self {
            lambda,
            cutoff: hi,
            bound: poisson_tail_bound(lambda, hi)?,
        })
    }
}

/// Neumaier compensated accumulator. Summation order is the caller's order, so
/// results are reproducible for a fixed sequence of addends.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

/// `x^p` with the convention `0^0 = 1`.
#[inline]
pub(crate) fn powi0(x: f64, p: u32) -> f64 {
    if p == 0 {
        1.0
    } else {
        x.powi(p as i32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ulps_apart(a: f64, b: f64) -> f64 {
        (a - b).abs() / (f64::EPSILON * b.abs())
    }

    #[test]
    fn log_basis_trivial_values() {
        assert_eq!(log_basis(7.0, 0, 0.0).unwrap(), 0.0);
        assert!((log_basis(1.0, 1, 1.0).unwrap() + 1.0).abs() < 1e-15);
        assert_eq!(log_basis(3.0, 4, 0.0).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn log_basis_matches_high_precision_values() {
        // ln s and s from 50-digit evaluation of k ln(nx) - ln k! - nx.
        let cases: [(f64, u64, f64, f64, f64); 9] = [
            (10.0, 5, 0.5, -1.740_302_180_611_544_1, 0.175_467_369_767_850_7),
            (1.0, 1000, 1000.0, -4.372_899_506_026_297, 0.012_614_611_348_721_5),
            (1.0, 1_000_000, 1_000_000.0, -7.826_693_895_520_143, 0.000_398_942_247_156_244_03),
            (100.0, 300, 3.0, -3.771_107_548_207_670_7, 0.023_026_546_149_187_352),
            (100.0, 250, 3.0, -8.099_613_126_802_696, 0.000_303_656_591_954_135_4),
            (1.0, 1, 1e-3, -6.908_755_278_982_137, 0.000_999_000_499_833_375),
            (20.0, 3, 0.25, -1.963_445_731_925_754, 0.140_373_895_814_280_56),
            (1.0, 1_000_000, 999_000.0, -8.327_027_479_053_643, 0.000_241_890_000_373_862_9),
            (5000.0, 10000, 2.0, -5.524_117_052_526_095, 0.003_989_389_558_962_826),
        ];
        for (n, k, x, ln_s, s) in cases {
            let got = log_basis(n, k, x).unwrap();
            assert!((got - ln_s).abs() <= 8.0 * f64::EPSILON * ln_s.abs(), "{n} {k} {x}: {got} vs {ln_s}");
            assert!(ulps_apart(got.exp(), s) <= 4.0 * ln_s.abs().max(1.0), "{n} {k} {x}");
        }
        let far = log_basis(3.7, 50, 2.2).unwrap();
        assert!((far - -51.778_257_951_050_59).abs() < 1e-12);
    }

    #[test]
    fn log_basis_rejects_bad_domain() {
        assert!(matches!(log_basis(0.0, 1, 1.0), Err(Error::Domain(_))));
        assert!(matches!(log_basis(1.0, 1, -0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn falling_factorial_values() {
        assert_eq!(falling_factorial(5, 0), BigInt::from(1));
        assert_eq!(falling_factorial(3, 5), BigInt::from(0));
        assert_eq!(falling_factorial(-2, 3), BigInt::from(-24));
        assert_eq!(falling_factorial(10, 3), BigInt::from(720));
    }

    #[test]
    fn falling_factorial_promotes_on_overflow() {
        // 40! overflows i128; compare with the factorial computed in big integers.
        assert_eq!(falling_factorial(40, 40), factorial(40));
        assert_eq!(falling_factorial(-1, 41), -factorial(41));
    }

    #[test]
    fn binomial_with_negative_top() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(-1, 3), BigInt::from(-1));
        assert_eq!(binomial(-3, 2), BigInt::from(6));
        assert_eq!(binomial(2, 5), BigInt::from(0));
    }

    #[test]
    fn poisson_tail_bound_examples() {
        let far = poisson_tail_bound(0.5, 200).unwrap();
        assert!((0.0..=1e-300).contains(&far));
        // P(Pois(10) > 10) = 0.41696..., P(Pois(10) > 30) = 7.98e-8.
        assert!(poisson_tail_bound(10.0, 10).unwrap() >= 0.4170);
        let b = poisson_tail_bound(10.0, 30).unwrap();
        assert!((7.983_794_659_911_185e-8..=3e-6).contains(&b), "{b}");
        assert!(poisson_tail_bound(0.0, 3).is_err());
    }

    #[test]
    fn lower_tail_bound_covers_exact_mass() {
        for &lambda in &[5.0, 40.0, 300.0] {
            for cutoff in 0..(lambda as u64) {
                let exact: f64 = (0..cutoff).map(|k| log_poisson(k, lambda).exp()).sum();
                let b = poisson_lower_tail_bound(lambda, cutoff).unwrap();
                assert!(b >= exact * (1.0 - 1e-12), "{lambda} {cutoff}: {b} < {exact}");
            }
        }
    }

    #[test]
    fn certified_cutoff_is_minimal() {
        let tb = TailBound::certified(50.0, 1e-12).unwrap();
        assert!(tb.bound <= 1e-12);
        assert!(poisson_tail_bound(50.0, tb.cutoff - 1).unwrap() > 1e-12);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let v = compensated_sum([1.0, 1e100, 1.0, -1e100]);
        assert_eq!(v, 2.0);
    }
}
