mod common;

use bohr_lab::weights::{cesaro_basis, hypergeometric_coefficients, WeightFamily};
use common::{binom_a, cesaro_phi, direct_sum, rising};
use proptest::prelude::*;

const TOL: f64 = 1e-13;

fn families() -> Vec<WeightFamily> {
    vec![
        WeightFamily::monomial(),
        WeightFamily::shifted_monomial(),
        WeightFamily::power(1.0).unwrap(),
        WeightFamily::power(2.0).unwrap(),
        WeightFamily::power(0.5).unwrap(),
        WeightFamily::hypergeometric(0.5, 1.0, 1.0).unwrap(),
        WeightFamily::hypergeometric(1.0, 2.0, 3.5).unwrap(),
        WeightFamily::cesaro(0.0).unwrap(),
        WeightFamily::cesaro(-0.6).unwrap(),
        WeightFamily::cesaro(2.0).unwrap(),
    ]
}

#[test]
fn tail_sum_matches_brute_force() {
    for w in families() {
        for r in [0.1f64, 0.4, 0.7] {
            let n = ((1e-16f64).ln() / r.ln()) as usize + 200;
            let brute = direct_sum(n, |k| {
                if k == 0 {
                    0.0
                } else {
                    w.weight_at(k, r).unwrap()
                }
            });
            let t = w.tail_sum(r, TOL).unwrap();
            assert!(
                (t.value - brute).abs() <= t.error_bound + 1e-12 * brute.max(1.0),
                "{} r={r}: {} vs {brute}",
                w.label(),
                t.value
            );
        }
    }
}

#[test]
fn explicit_weights() {
    let r = 0.3f64;
    for k in 0..20 {
        let rk = r.powi(k as i32);
        assert!((WeightFamily::monomial().weight_at(k, r).unwrap() - rk).abs() <= 1e-16);
        let s = WeightFamily::shifted_monomial().weight_at(k, r).unwrap();
        assert!((s - (k as f64 + 1.0) * rk).abs() <= 1e-15);
        let p = WeightFamily::power(1.5).unwrap().weight_at(k, r).unwrap();
        let expected = if k == 0 {
            1.0
        } else {
            (k as f64).powf(1.5) * rk
        };
        assert!((p - expected).abs() <= 1e-14 * expected);
    }
}

#[test]
fn hypergeometric_coefficients_are_pochhammer_ratios() {
    let (a, b, c) = (0.7, 1.3, 2.2);
    let g = hypergeometric_coefficients(a, b, c, 30);
    for (k, &gk) in g.iter().enumerate() {
        let fact = rising(1.0, k);
        let exact = rising(a, k) * rising(b, k) / (rising(c, k) * fact);
        assert!((gk - exact).abs() <= 1e-13 * exact, "k={k}");
    }
}

#[test]
fn hypergeometric_rejects_sign_changes() {
    // (a)_k changes sign once a is negative
    assert!(WeightFamily::hypergeometric(-0.5, 1.0, 1.0).is_err());
    assert!(WeightFamily::hypergeometric(1.0, 1.0, 0.0).is_err());
    assert!(WeightFamily::hypergeometric(1.0, 1.0, -1.5).is_err());
    assert!(WeightFamily::hypergeometric(0.5, 0.5, 0.25).is_ok());
}

#[test]
fn cesaro_basis_against_brute_force() {
    for alpha in [-0.9, -0.5, 0.0, 1.0, 3.7] {
        for n in [0, 1, 5, 40] {
            for r in [0.2, 0.5, 0.8] {
                let v = cesaro_basis(alpha, n, r, TOL).unwrap();
                let brute = cesaro_phi(alpha, n, r, 400);
                assert!(
                    (v.value - brute).abs() <= v.error_bound + 1e-13 * brute.max(1e-300),
                    "alpha={alpha} n={n} r={r}: {} vs {brute}",
                    v.value
                );
            }
        }
    }
}

#[test]
fn cesaro_phi0_is_a_lerch_value() {
    // A_k^1 = k + 1, so φ_0(r) = Σ r^k/(k+1) = −log(1−r)/r
    for r in [0.1f64, 0.5, 0.9] {
        let phi0 = WeightFamily::cesaro(0.0).unwrap().phi0(r, TOL).unwrap();
        let log = -(-r).ln_1p() / r;
        assert!((phi0.value - log).abs() <= phi0.error_bound + 4.0 * f64::EPSILON * log);
    }
}

#[test]
fn cesaro_full_sum_identity() {
    for alpha in [-0.5, 0.0, 1.0] {
        for i in 1..=8 {
            let r = i as f64 / 10.0;
            let w = WeightFamily::cesaro(alpha).unwrap();
            let phi0 = w.phi0(r, TOL).unwrap();
            let tail = w.tail_sum(r, TOL).unwrap();
            let total = phi0.value + tail.value;
            let bound = phi0.error_bound + tail.error_bound;
            assert!((total - 1.0 / (1.0 - r)).abs() <= bound + 1e-14 / (1.0 - r));
        }
    }
}

#[test]
fn generating_sum_at_zero_and_against_partial_sums() {
    for w in families() {
        let r = 0.6;
        let g0 = w.generating_sum(0.0, r, TOL).unwrap();
        let phi0 = w.phi0(r, TOL).unwrap();
        assert!((g0.value - phi0.value).abs() <= g0.error_bound + phi0.error_bound + 1e-15);
        let t = 0.7f64;
        let phi = w.weights_upto(300, r, TOL).unwrap();
        let brute: f64 = phi
            .iter()
            .enumerate()
            .map(|(k, p)| t.powi(k as i32) * p)
            .sum();
        let g = w.generating_sum(t, r, TOL).unwrap();
        assert!(
            (g.value - brute).abs() <= g.error_bound + 1e-12 * brute,
            "{}",
            w.label()
        );
    }
}

#[test]
fn invalid_arguments() {
    assert!(WeightFamily::cesaro(-1.0).is_err());
    assert!(WeightFamily::power(f64::NAN).is_err());
    assert!(WeightFamily::monomial().weight(0, 1.0, TOL).is_err());
    assert!(WeightFamily::monomial()
        .generating_sum(1.0, 0.5, TOL)
        .is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn binomial_ratio_is_decreasing(alpha in -0.99f64..5.0, k in 0usize..400) {
        // A_k^α / A_k^{α+1} = (α+1)/(k+α+1) decreases in k
        let now = binom_a(alpha, k) / binom_a(alpha + 1.0, k);
        let next = binom_a(alpha, k + 1) / binom_a(alpha + 1.0, k + 1);
        prop_assert!(next < now);
        prop_assert!((now - (alpha + 1.0) / (k as f64 + alpha + 1.0)).abs() <= 1e-12 * now);
    }

    #[test]
    fn weights_are_nonnegative_and_decrease(alpha in 0.0f64..4.0, r in 0.0f64..0.95, k in 0usize..60) {
        let w = WeightFamily::cesaro(alpha).unwrap();
        let now = w.weight(k, r, 1e-12).unwrap();
        let next = w.weight(k + 1, r, 1e-12).unwrap();
        prop_assert!(now.value >= 0.0);
        // for α ≥ 0, A_j^α grows in j, so φ_{k+1} is dominated term by term
        prop_assert!(next.value <= now.value + now.error_bound + next.error_bound);
    }

    #[test]
    fn tail_sums_increase_in_r(a in 0.0f64..0.9, b in 0.0f64..0.9) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        for w in families() {
            let x = w.tail_sum(lo, 1e-12).unwrap();
            let y = w.tail_sum(hi, 1e-12).unwrap();
            prop_assert!(x.value <= y.value + x.error_bound + y.error_bound, "{}", w.label());
        }
    }
}
