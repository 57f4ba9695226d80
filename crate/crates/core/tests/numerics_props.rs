mod common;

use num_bigint::BigInt;
use proptest::prelude::*;
use szasz_durrmeyer::numerics::{
    binomial, compensated_sum, falling_factorial, log_basis, poisson_lower_tail_bound,
    poisson_tail_bound, TailBound,
};

#[test]
fn basis_sums_to_one_within_certified_window() {
    let tau = 1e-12;
    for &n in &[1.0, 7.5, 50.0, 1000.0] {
        for &x in &[0.01, 0.5, 2.0, 10.0] {
            let lambda: f64 = n * x;
            if lambda > 1e4 {
                continue;
            }
            let tb = TailBound::certified(lambda, tau).unwrap();
            let sum = compensated_sum((0..=tb.cutoff).map(|k| log_basis(n, k, x).unwrap().exp()));
            assert!((sum - 1.0).abs() <= tau + 1e-14, "n = {n}, x = {x}: {sum}");
        }
    }
}

#[test]
fn vandermonde_identity_for_falling_factorials() {
    for j in -6i64..=6 {
        for r in 0u32..=8 {
            for k in 0i64..=40 {
                let lhs = falling_factorial(k - j + r as i64, r);
                let rhs: BigInt = (0..=r)
                    .map(|i| binomial(r as i64, i) * falling_factorial(k, i) * falling_factorial(r as i64 - j, r - i))
                    .sum();
                assert_eq!(lhs, rhs, "j = {j}, r = {r}, k = {k}");
            }
        }
    }
}

fn exact_upper_tail(lambda: f64, cutoff: u64) -> f64 {
    // P(X > cutoff) summed upward until terms vanish.
    let mut term = (-lambda + cutoff as f64 * lambda.ln() - ln_factorial(cutoff)).exp();
    let mut sum = 0.0;
    let mut k = cutoff;
    loop {
        k += 1;
        term *= lambda / k as f64;
        sum += term;
        if term < 1e-300 || (term < sum * 1e-18 && k as f64 > lambda) {
            return sum;
        }
    }
}

fn ln_factorial(k: u64) -> f64 {
    (1..=k).map(|i| (i as f64).ln()).sum()
}

#[test]
fn tail_bounds_dominate_exact_tails() {
    for &lambda in &[0.5f64, 1.0, 10.0, 100.0] {
        let start = lambda.ceil() as u64;
        let stop = start + (20.0 * lambda.sqrt()).ceil() as u64 + 20;
        for cutoff in start..=stop {
            let exact = exact_upper_tail(lambda, cutoff);
            let bound = poisson_tail_bound(lambda, cutoff).unwrap();
            assert!(bound >= exact * (1.0 - 1e-12), "lambda = {lambda}, K = {cutoff}: {bound} < {exact}");
        }
    }
}

#[test]
fn lower_tail_bound_dominates_exact_lower_tail() {
    let lambda = 60.0;
    for cutoff in 1..60u64 {
        let exact: f64 = (0..cutoff).map(|k| log_basis(1.0, k, lambda).unwrap().exp()).sum();
        assert!(poisson_lower_tail_bound(lambda, cutoff).unwrap() >= exact);
    }
}

proptest! {
    #[test]
    fn log_basis_matches_direct_formula(n in 0.5f64..50.0, x in 0.01f64..4.0, k in 0u64..60) {
        let direct = (k as f64) * (n * x).ln() - n * x - ln_factorial(k);
        let got = log_basis(n, k, x).unwrap();
        prop_assert!((got - direct).abs() <= 1e-12 * direct.abs().max(1.0));
    }

    #[test]
    fn binomial_pascal_rule(a in -30i64..30, b in 1u32..20) {
        prop_assert_eq!(binomial(a, b), binomial(a - 1, b) + binomial(a - 1, b - 1));
    }
}
