mod common;

use common::{exact_central_moment, exact_moment, rel_close};
use proptest::prelude::*;
use szasz_durrmeyer::moments::{central_moment, central_moment_bounds, moment};
use szasz_durrmeyer::OperatorParams;

const NS: [f64; 3] = [5.0, 20.0, 100.0];
const XS: [f64; 4] = [0.0, 0.25, 1.0, 3.0];

#[test]
fn moments_match_exact_oracle() {
    for j in -3i64..=6 {
        for r in 0u32..=8 {
            for &n in &NS {
                for &x in &XS {
                    let got = moment(OperatorParams::new(n, j).unwrap(), r, x).unwrap();
                    let want = exact_moment(n, j, r, x).to_f64(n, x);
                    assert!(rel_close(got, want, 1e-13, 1e-15), "j={j} r={r} n={n} x={x}: {got} vs {want}");
                }
            }
        }
    }
}

#[test]
fn central_moments_match_binomial_expansion() {
    for j in -3i64..=6 {
        for s in 0u32..=8 {
            for &n in &NS {
                for &x in &XS {
                    let c = central_moment(OperatorParams::new(n, j).unwrap(), s, x).unwrap();
                    let exact = exact_central_moment(n, j, s, x);
                    let want = exact.to_f64(n, x);
                    assert!(rel_close(c.total, want, 1e-12, 1e-14), "j={j} s={s} n={n} x={x}: {} vs {want}", c.total);
                    if j <= 1 {
                        assert_eq!(c.tail, 0.0);
                    }
                }
            }
        }
    }
}

#[test]
fn first_two_central_moments_respect_bounds() {
    for j in -3i64..=6 {
        for s in 1u32..=2 {
            for &n in &NS {
                for &x in &XS {
                    let p = OperatorParams::new(n, j).unwrap();
                    let total = central_moment(p, s, x).unwrap().total;
                    let (lo, hi) = central_moment_bounds(p, s, x).unwrap();
                    let slack = 1e-14 * lo.abs().max(hi.abs()).max(1e-300);
                    assert!(total >= lo - slack && total <= hi + slack, "j={j} s={s} n={n} x={x}: {total} not in [{lo}, {hi}]");
                }
            }
        }
    }
}

#[test]
fn preserved_monomial_and_exact_case() {
    for j in 1i64..=5 {
        for &n in &NS {
            for &x in &XS {
                let p = OperatorParams::new(n, j).unwrap();
                let want = x.powi(j as i32);
                assert!(rel_close(moment(p, j as u32, x).unwrap(), want, 1e-12, 0.0));
            }
        }
    }
    for j in -3i64..=5 {
        for r in (j.max(0) as u32)..=8 {
            assert_eq!(exact_moment(20.0, j, r, 1.0).exp_coeff, num_rational::BigRational::from_integer(0.into()));
        }
    }
}

proptest! {
    #[test]
    fn moment_of_random_params(n in 1.0f64..200.0, j in -4i64..7, r in 0u32..7, x in 0.0f64..5.0) {
        let n = (n * 8.0).round() / 8.0;
        let x = (x * 64.0).round() / 64.0;
        let got = moment(OperatorParams::new(n, j).unwrap(), r, x).unwrap();
        let want = exact_moment(n, j, r, x).to_f64(n, x);
        prop_assert!(rel_close(got, want, 1e-12, 1e-14), "{got} vs {want}");
    }
}
