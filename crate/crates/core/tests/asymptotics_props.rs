mod common;

use std::f64::consts::SQRT_2;

use bohr_lab::asymptotics::{
    asymptotic_report, bb_closed_sum, classical_envelopes, constant_for, dilog_majorant,
    limit_expression, lower_bound_profile, lower_bound_terms, lower_constant, phi_n_alpha1,
    q_equation, secondary_constant, solve_q, upper_envelope,
};
use bohr_lab::cesaro::s_alpha_majorant;
use common::{golden_max, iterated_integral};
use proptest::prelude::*;

const TOL: f64 = 1e-13;

fn five_digits(x: f64) -> String {
    format!("{x:.5}")
}

#[test]
fn q_and_the_constants() {
    let q = solve_q();
    assert!(q_equation(q).abs() <= 1e-10);
    assert_eq!(five_digits(q), "7.57736");
    assert_eq!(five_digits(lower_constant()), "1.47217");
    assert_eq!(five_digits(secondary_constant()), "1.09261");
    assert!((constant_for(1.0) - SQRT_2).abs() < 1e-15);
    let by_formula = 4.0 * (2.0 * q).sqrt() / (3.0 + q);
    assert!((lower_constant() - by_formula).abs() < 1e-15);
}

#[test]
fn q_maximizes_the_limit_expression() {
    let arg = golden_max(limit_expression, 0.01, 100.0, 1e-10);
    assert!((arg - solve_q()).abs() <= 1e-6, "{arg}");
    assert!((limit_expression(solve_q()) - lower_constant()).abs() < 1e-12);
}

#[test]
fn generating_sum_against_double_sum() {
    for i in 1..=9 {
        for j in 1..=9 {
            let t = i as f64 / 10.0;
            let r = j as f64 / 10.0;
            // Σ_k t^k φ_k(r) with φ_k(r) = 2 Σ_{m≥k} (m−k+1)/((m+1)(m+2)) r^m
            let mut direct = 0.0;
            for m in 0..420usize {
                let mf = m as f64;
                let w = 2.0 * r.powi(m as i32) / ((mf + 1.0) * (mf + 2.0));
                for k in 0..=m {
                    direct += t.powi(k as i32) * (m - k + 1) as f64 * w;
                }
            }
            let v = bb_closed_sum(t, r).unwrap();
            assert!(
                (v.value - direct).abs() <= v.error_bound + 1e-13 * direct,
                "t={t} r={r}"
            );
        }
    }
}

#[test]
fn generating_sum_limits() {
    for r in [0.1f64, 0.5, 0.9] {
        let at_zero = bb_closed_sum(0.0, r).unwrap();
        let phi0 = 2.0 * (-r - (-r).ln_1p()) / (r * r);
        assert!((at_zero.value - phi0).abs() <= at_zero.error_bound + 1e-15);
        // Σ_k φ_k(r) = 1/(1−r)
        let near_one = bb_closed_sum(1.0 - 1e-9, r).unwrap();
        assert!((near_one.value - 1.0 / (1.0 - r)).abs() < 1e-7 / (1.0 - r).powi(2));
    }
    assert!(bb_closed_sum(1.0, 0.5).is_err());
    assert!(bb_closed_sum(0.5, 0.0).is_err());
}

#[test]
fn phi_n_against_quadrature() {
    for n in 0..=10 {
        for j in 1..=8 {
            let r = j as f64 / 10.0;
            let quad = 2.0 / (r * r)
                * iterated_integral(&|s: f64| s.powi(n) / ((1.0 - s) * (1.0 - s)), r, 1e-13);
            let v = phi_n_alpha1(n as usize, r, TOL).unwrap();
            assert!(
                (v.value - quad).abs() <= 1e-8,
                "n={n} r={r}: {} vs {quad}",
                v.value
            );
        }
    }
    let tiny = phi_n_alpha1(0, 1e-9, TOL).unwrap();
    assert!((tiny.value - 1.0).abs() < 1e-8);
}

#[test]
fn phi_n_sum_to_the_geometric_value() {
    let r = 0.5;
    let total: f64 = (0..80)
        .map(|n| phi_n_alpha1(n, r, 1e-15).unwrap().value)
        .sum();
    assert!((total - 2.0).abs() < 1e-12);
}

#[test]
fn dilog_form_of_the_majorant() {
    for j in 1..=9 {
        let r = j as f64 / 10.0;
        let a = dilog_majorant(r, TOL).unwrap();
        let b = s_alpha_majorant(1.0, r, TOL).unwrap();
        assert!((a.value - b.value).abs() <= 1e-10, "r={r}");
    }
}

#[test]
fn envelope_values() {
    let e = classical_envelopes(0.8).unwrap();
    assert!((e.bombieri_bourgain.value - 5.0 / 3.0).abs() < 1e-15);
    assert!(e.bombieri_bourgain.in_range);
    assert!(!e.bombieri.in_range);
    // (3 − √(64/9))·3 = (3 − 8/3)·3 = 1
    let e = classical_envelopes(1.0 / 3.0).unwrap();
    assert!((e.bombieri.value - 1.0).abs() < 1e-14);
    assert!(e.bombieri.in_range && !e.bombieri_bourgain.in_range);
    let expected = SQRT_2 * ((1.0f64 / (1.0 - 0.9801)).ln() / 0.01).sqrt();
    assert!((upper_envelope(0.99).unwrap() - expected).abs() < 1e-12);
    assert!(classical_envelopes(0.0).is_err());
    assert!(upper_envelope(1.0).is_err());
}

#[test]
fn leading_term_approaches_the_constant() {
    let c = lower_constant();
    let terms = lower_bound_terms(0.999, TOL).unwrap();
    let scaled = terms.leading.value * 0.001f64.sqrt();
    assert!((scaled - c).abs() <= 0.03 * c, "{scaled}");
    let r = 0.99;
    let scaled = lower_bound_terms(r, TOL).unwrap().leading.value * (1.0 - r).sqrt();
    assert!((scaled - c).abs() <= 0.10 * c);
}

#[test]
fn profile_converges_from_below() {
    // r = 1 − 10^{−k}; from k = 2 on the scaled profile increases and the
    // scaled subtracted term decreases
    let c = lower_constant();
    let mut last_profile = f64::NEG_INFINITY;
    let mut last_sub = f64::INFINITY;
    for k in 2..=12 {
        let eps = 10f64.powi(-k);
        let r = 1.0 - eps;
        let terms = lower_bound_terms(r, TOL).unwrap();
        let p = terms.value();
        let scaled = p.value * eps.sqrt();
        let sub = terms.subtracted.value * eps.sqrt();
        assert!(scaled <= c + p.error_bound * eps.sqrt(), "k={k}: {scaled}");
        assert!(
            scaled > last_profile,
            "k={k}: {scaled} after {last_profile}"
        );
        assert!(sub < last_sub, "k={k}: {sub} after {last_sub}");
        last_profile = scaled;
        last_sub = sub;
    }
    assert!(last_sub < 1e-3);
    assert!((last_profile - c).abs() < 1e-3);
}

#[test]
fn report_fields() {
    let rs = [0.9, 0.99, 0.999, 0.9999];
    let rep = asymptotic_report(&rs, TOL).unwrap();
    assert_eq!(rep.profile.len(), 4);
    assert!(rep.q_residual.abs() <= 1e-10);
    for (row, &r) in rep.profile.iter().zip(&rs) {
        let direct = lower_bound_profile(r, TOL).unwrap().value * (1.0 - r).sqrt();
        assert!((row.scaled_profile - direct).abs() < 1e-12);
        assert!((row.scaled_leading - row.scaled_subtracted - row.scaled_profile).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generating_sum_is_increasing_in_t(a in 0.0f64..0.99, b in 0.0f64..0.99, r in 0.01f64..0.99) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let x = bb_closed_sum(lo, r).unwrap();
        let y = bb_closed_sum(hi, r).unwrap();
        prop_assert!(x.value <= y.value + x.error_bound + y.error_bound);
        prop_assert!(y.value <= 1.0 / (1.0 - r) + y.error_bound);
    }
}
