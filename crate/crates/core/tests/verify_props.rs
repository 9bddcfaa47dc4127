mod common;

use bohr_lab::cesaro::CesaroContext;
use bohr_lab::radius::{cesaro_radius, general_radius, RadiusProblem};
use bohr_lab::verify::{
    blaschke_coefficients, bohr_functional, certify_radius, mobius_functional, mobius_moduli,
    sample_schur, schur_with_zeros, witness_order, CertificationGrid, CertificationStatus,
};
use bohr_lab::WeightFamily;
use num_complex::Complex64;
use proptest::prelude::*;

const TOL: f64 = 1e-12;

fn families() -> Vec<WeightFamily> {
    vec![
        WeightFamily::monomial(),
        WeightFamily::shifted_monomial(),
        WeightFamily::power(1.0).unwrap(),
        WeightFamily::power(2.0).unwrap(),
        WeightFamily::hypergeometric(2.0, 1.0, 1.0).unwrap(),
        WeightFamily::cesaro(0.0).unwrap(),
        WeightFamily::cesaro(1.0).unwrap(),
    ]
}

fn radius_of(w: WeightFamily, p: f64) -> f64 {
    general_radius(&RadiusProblem::new(w, p).unwrap())
        .unwrap()
        .expect_root()
        .unwrap()
        .radius
}

#[test]
fn mobius_moduli_examples() {
    let m = mobius_moduli(0.0, 5).unwrap();
    assert_eq!(m.moduli, vec![0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
    let m = mobius_moduli(0.5, 200).unwrap();
    assert_eq!(&m.moduli[..4], &[0.5, 0.75, 0.375, 0.1875]);
    let energy: f64 = m.moduli.iter().map(|x| x * x).sum();
    assert!((energy - 1.0).abs() <= 1e-10);
    assert!(mobius_moduli(1.0, 5).is_err());
    assert!(witness_order(0.999, 0.5, 1e-12) > 200);
    assert_eq!(witness_order(0.1, 0.2, 1e-12), 200);
}

#[test]
fn blaschke_coefficients_match_direct_evaluation() {
    let zeros = [
        Complex64::from_polar(0.7, 0.3),
        Complex64::from_polar(0.2, 2.0),
        Complex64::new(-0.5, 0.0),
    ];
    let lambda = Complex64::from_polar(1.0, 1.1);
    let coeffs = blaschke_coefficients(&zeros, lambda, 300);
    for z in [Complex64::new(0.3, 0.1), Complex64::from_polar(0.6, -2.0)] {
        let direct = zeros.iter().fold(lambda, |acc, a| {
            acc * (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z)
        });
        let series = coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
        assert!((direct - series).norm() < 1e-13);
    }
    // inner: |B| = 1 on the circle, and Σ|b_k|² = 1
    let energy: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    assert!((energy - 1.0).abs() < 1e-12);
}

#[test]
fn degenerate_samples() {
    let s = schur_with_zeros(&[Complex64::new(0.4, 0.0)], 50);
    let m = mobius_moduli(0.4, 50).unwrap();
    for (x, y) in s.moduli.iter().zip(&m.moduli) {
        assert!((x - y).abs() < 1e-15);
    }
    let c = schur_with_zeros(&[], 10);
    assert_eq!(c.moduli[0], 1.0);
    assert!(c.moduli[1..].iter().all(|&x| x == 0.0));
    assert_eq!(sample_schur(42, 100), sample_schur(42, 100));
}

#[test]
fn functional_examples() {
    let w = WeightFamily::monomial();
    let v = bohr_functional(&w, 1.0, &[0.0, 1.0], 0.5, TOL).unwrap();
    assert!((v.value - 0.5).abs() <= v.error_bound);
    let b = mobius_functional(&w, 1.0, 0.9, 1.0 / 3.0, TOL).unwrap();
    assert!(b.value <= 1.0 + b.error_bound);
    for w in families() {
        for p in [0.5, 1.0, 3.0] {
            let v = bohr_functional(&w, p, &[1.0, 0.0, 0.0], 0.4, TOL).unwrap();
            let phi0 = w.phi0(0.4, TOL).unwrap();
            assert!((v.value - phi0.value).abs() <= v.error_bound + phi0.error_bound);
        }
    }
}

#[test]
fn mobius_functional_against_truncated_moduli() {
    for w in families() {
        for a in [0.3, 0.9] {
            let r = 0.3;
            let order = witness_order(a, r, 1e-16);
            let m = mobius_moduli(a, order).unwrap();
            let truncated = bohr_functional(&w, 1.5, &m.moduli, r, 1e-14).unwrap();
            let exact = mobius_functional(&w, 1.5, a, r, 1e-14).unwrap();
            let gap = (truncated.value - exact.value).abs();
            assert!(
                gap <= truncated.error_bound + exact.error_bound + m.tail_bound(r) * 10.0,
                "{}",
                w.label()
            );
        }
    }
}

#[test]
fn mobius_expansion_is_second_order() {
    // B_f − φ_0 = (1−a)[2 Σ a^{k−1} φ_k − p φ_0] + E, and expanding a^p and
    // 1 − a² gives E/(1−a)² → p(p−1)/2 φ_0 − Σ_{k≥1} φ_k as a → 1
    let r = 0.3;
    for w in [
        WeightFamily::monomial(),
        WeightFamily::shifted_monomial(),
        WeightFamily::cesaro(0.0).unwrap(),
    ] {
        for p in [1.0, 2.0] {
            let phi = w.weights_upto(4000, r, 1e-15).unwrap();
            let tail: f64 = phi[1..].iter().sum();
            let limit = 0.5 * p * (p - 1.0) * phi[0] - tail;
            for a in [0.9f64, 0.99, 0.999] {
                let s: f64 = phi
                    .iter()
                    .skip(1)
                    .enumerate()
                    .map(|(i, f)| a.powi(i as i32) * f)
                    .sum();
                let b = mobius_functional(&w, p, a, r, 1e-15).unwrap().value;
                let e = b - phi[0] - (1.0 - a) * (2.0 * s - p * phi[0]);
                let c = e / (1.0 - a).powi(2);
                assert!(
                    (c - limit).abs() <= 10.0 * (1.0 - a) * (1.0 + limit.abs()),
                    "{} p={p} a={a}: {c} vs {limit}",
                    w.label()
                );
            }
        }
    }
}

#[test]
fn samples_stay_below_phi0_inside_the_radius() {
    for w in families() {
        for p in [1.0, 2.0] {
            let radius = radius_of(w, p);
            for seed in 0..50 {
                let s = sample_schur(seed, 200);
                for i in 1..=10 {
                    let r = radius * i as f64 / 10.0;
                    let b = bohr_functional(&w, p, &s.moduli, r, TOL).unwrap();
                    let phi0 = w.phi0(r, TOL).unwrap();
                    assert!(
                        b.value <= phi0.value + 1e-9,
                        "{} p={p} seed={seed} r={r}",
                        w.label()
                    );
                }
            }
        }
    }
}

#[test]
fn cesaro_bohr_sums_below_lerch_inside_the_radius() {
    for alpha in [-0.5, 0.0, 1.0, 3.0] {
        let radius = cesaro_radius(alpha, TOL).unwrap().radius;
        let ctx = CesaroContext::new(alpha, 400).unwrap();
        for seed in 0..50 {
            let s = sample_schur(seed, 200);
            for i in 1..=10 {
                let r = radius * i as f64 / 10.0;
                let b = ctx.bohr_sum(&s.moduli, r, TOL).unwrap();
                let l = ctx.lerch_majorant(r, TOL).unwrap();
                assert!(b.value <= l.value + 1e-9, "alpha={alpha} seed={seed} r={r}");
            }
        }
    }
}

#[test]
fn certification_reports() {
    let grid = CertificationGrid::default();
    for (w, p) in [
        (WeightFamily::monomial(), 1.0),
        (WeightFamily::shifted_monomial(), 1.0),
        (WeightFamily::cesaro(0.0).unwrap(), 1.0),
    ] {
        let radius = radius_of(w, p);
        let rep = certify_radius(&w, p, radius, &grid).unwrap();
        assert_eq!(rep.status, CertificationStatus::Certified, "{}", w.label());
        assert!(rep.max_below_slack <= 1e-9);
        let v = rep.violation.unwrap();
        assert!(v.r > radius && v.bohr_functional > v.phi0);
    }
    // a = 0.99 already breaks the classical inequality at r = 0.35
    let b = mobius_functional(&WeightFamily::monomial(), 1.0, 0.99, 0.35, TOL).unwrap();
    assert!(b.lower() > 1.0);
}

#[test]
fn certification_catches_a_radius_that_is_too_large() {
    let w = WeightFamily::monomial();
    let grid = CertificationGrid {
        schur_samples: 5,
        ..CertificationGrid::default()
    };
    let rep = certify_radius(&w, 1.0, 0.45, &grid).unwrap();
    assert_eq!(rep.status, CertificationStatus::BelowRadiusFailure);
}

#[test]
fn certification_is_deterministic() {
    let w = WeightFamily::power(1.0).unwrap();
    let grid = CertificationGrid {
        seed: 7,
        ..CertificationGrid::default()
    };
    let radius = radius_of(w, 1.0);
    let a = serde_json::to_string(&certify_radius(&w, 1.0, radius, &grid).unwrap()).unwrap();
    let b = serde_json::to_string(&certify_radius(&w, 1.0, radius, &grid).unwrap()).unwrap();
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn schwarz_pick_holds(seed in any::<u64>()) {
        let s = sample_schur(seed, 100);
        let m0 = s.moduli[0];
        prop_assert!(m0 <= 1.0);
        for &m in &s.moduli[1..] {
            prop_assert!(m <= 1.0 - m0 * m0 + 1e-12);
        }
        prop_assert!(s.zeros.len() <= 4);
        prop_assert!(s.zeros.iter().all(|&(x, y)| x.hypot(y) < 1.0));
    }
}
