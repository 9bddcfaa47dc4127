//! Growth envelopes of Bohr sums as r → 1 and the sharp constant for the
//! Bohr sum of the classical (α = 1) Cesàro-type operator.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{BohrError, Result};
use crate::roots::{bisect, Bracket};
use crate::specfun::{dilog, EvalResult};
use crate::weights::cesaro_basis;

/// Bisection bracket and tolerance for the root of 3q = (3+q) log(1+q).
const Q_BRACKET: (f64, f64) = (1.0, 100.0);
const Q_TOLERANCE: f64 = 1e-12;

fn check_open_unit(what: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(BohrError::domain(what, x, "0 < x < 1"))
    }
}

/// 3q − (3+q) log(1+q).
pub fn q_equation(q: f64) -> f64 {
    3.0 * q - (3.0 + q) * q.ln_1p()
}

/// Positive root of 3q = (3+q) log(1+q), ≈ 7.57736.
pub fn solve_q() -> f64 {
    let (lo, hi) = Q_BRACKET;
    let bracket = Bracket {
        lo,
        hi,
        f_lo: q_equation(lo),
        f_hi: q_equation(hi),
    };
    let (q, _, _) = bisect(|q| Ok(q_equation(q)), bracket, Q_TOLERANCE).expect("fixed bracket");
    q
}

/// (−q + (q+1) log(q+1)) / (q/2)^{3/2}; its maximum over q > 0 is the
/// sharp constant, attained at the root of [`q_equation`].
pub fn limit_expression(q: f64) -> f64 {
    (-q + (q + 1.0) * q.ln_1p()) / (0.5 * q).powf(1.5)
}

/// 4√(2q)/(3+q) for a given q.
pub fn constant_for(q: f64) -> f64 {
    4.0 * (2.0 * q).sqrt() / (3.0 + q)
}

/// The sharp constant 4√(2q)/(3+q) ≈ 1.47217 at the root q.
pub fn lower_constant() -> f64 {
    constant_for(solve_q())
}

/// 2√2 (log 4 − 1) ≈ 1.09261, the constant obtained from the leading
/// term alone with t = r².
pub fn secondary_constant() -> f64 {
    2.0 * SQRT_2 * (4f64.ln() - 1.0)
}

/// Σ_{k≥0} t^k φ_k(r) for the α = 1 basis, in closed form
///
/// 2[−r(1−t) + (1−rt) log((1−rt)/(1−r))] / (r²(1−t)²).
///
/// With u = r(1−t)/(1−r) the bracket is (1−r) h(u), h(u) = (1+u) log(1+u) − u,
/// and h is summed as a series for small u, where the two terms cancel.
pub fn bb_closed_sum(t: f64, r: f64) -> Result<EvalResult> {
    if !(0.0..1.0).contains(&t) {
        return Err(BohrError::domain("t", t, "0 <= t < 1"));
    }
    check_open_unit("r", r)?;
    let s = 1.0 - t;
    let q = 1.0 - r;
    let u = r * s / q;
    let (h, h_rel) = entropy_like(u);
    let value = 2.0 * q * h / (r * r * s * s);
    Ok(EvalResult::new(
        value,
        (h_rel + 16.0 * f64::EPSILON) * value,
    ))
}

/// (1+u) log(1+u) − u for u ≥ 0, with a relative error bound.
fn entropy_like(u: f64) -> (f64, f64) {
    if u >= 0.5 {
        let l = (1.0 + u) * u.ln_1p();
        let v = l - u;
        return (v, 8.0 * f64::EPSILON * (l + u) / v);
    }
    // Σ_{m≥2} (−u)^m / (m(m−1)), alternating with decreasing terms
    let mut sum = 0.0;
    let mut pow = u * u;
    let mut m = 2.0;
    loop {
        let term = pow / (m * (m - 1.0));
        sum += term;
        pow *= -u;
        let next = (pow / ((m + 1.0) * m)).abs();
        if next <= f64::EPSILON * sum.abs() || pow == 0.0 {
            return (sum, (next / sum.abs()).min(1.0) + 4.0 * m * f64::EPSILON);
        }
        m += 1.0;
    }
}

/// φ_n(r) = 2 Σ_{k≥n} (k−n+1)/((k+1)(k+2)) r^k for α = 1.
pub fn phi_n_alpha1(n: usize, r: f64, tol: f64) -> Result<EvalResult> {
    cesaro_basis(1.0, n, r, tol)
}

/// √2 √(log(1/(1−r²))/(1−r)).
pub fn upper_envelope(r: f64) -> Result<f64> {
    check_open_unit("r", r)?;
    Ok(SQRT_2 * (-(-r * r).ln_1p() / (1.0 - r)).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeValue {
    pub value: f64,
    /// Whether r lies in the range where the bound is stated.
    pub in_range: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalEnvelopes {
    /// (3 − √(8(1−r²)))/r, stated for 1/3 ≤ r ≤ 1/√2.
    pub bombieri: EnvelopeValue,
    /// 1/√(1−r²), stated for r > 1/√2.
    pub bombieri_bourgain: EnvelopeValue,
}

pub fn classical_envelopes(r: f64) -> Result<ClassicalEnvelopes> {
    check_open_unit("r", r)?;
    let one_minus_r2 = (1.0 - r) * (1.0 + r);
    let edge = 0.5f64.sqrt();
    Ok(ClassicalEnvelopes {
        bombieri: EnvelopeValue {
            value: (3.0 - (8.0 * one_minus_r2).sqrt()) / r,
            in_range: (1.0 / 3.0..=edge).contains(&r),
        },
        bombieri_bourgain: EnvelopeValue {
            value: 1.0 / one_minus_r2.sqrt(),
            in_range: r > edge,
        },
    })
}

/// (2/(1−r²)) √(π²/6 − Li₂(r²)/r²), the α = 1 majorant written with the
/// dilogarithm.
pub fn dilog_majorant(r: f64, tol: f64) -> Result<EvalResult> {
    check_open_unit("r", r)?;
    let r2 = r * r;
    let pi2_6 = EvalResult::new(PI * PI / 6.0, f64::EPSILON);
    let inner = pi2_6 - dilog(r2, tol)?.scale(1.0 / r2);
    Ok(inner.sqrt().scale(2.0 / ((1.0 - r) * (1.0 + r))))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileTerms {
    pub r: f64,
    pub t: f64,
    /// √(1−t²) Σ t^k φ_k(r)
    pub leading: EvalResult,
    /// √(1−t²) √(log(1/(1−t))) (2/(1−r²)) √(π²/6 − Li₂(r²)/r²)
    pub subtracted: EvalResult,
}

impl ProfileTerms {
    pub fn value(&self) -> EvalResult {
        self.leading - self.subtracted
    }
}

/// Both terms of the lower bound for the α = 1 Bohr sum, at t = r^q with q
/// the root of 3q = (3+q) log(1+q).
pub fn lower_bound_terms(r: f64, tol: f64) -> Result<ProfileTerms> {
    check_open_unit("r", r)?;
    let q = solve_q();
    let t = r.powf(q);
    let w = ((1.0 - t) * (1.0 + t)).sqrt();
    let leading = bb_closed_sum(t, r)?.scale(w);
    let log_term = (-(-t).ln_1p()).sqrt();
    let subtracted = dilog_majorant(r, tol)?.scale(w * log_term);
    Ok(ProfileTerms {
        r,
        t,
        leading,
        subtracted,
    })
}

/// The two-term lower bound √(1−t²) Σ t^k φ_k(r) − √(1−t²) √(log(1/(1−t)))
/// (2/(1−r²)) √(π²/6 − Li₂(r²)/r²) at t = r^q.
pub fn lower_bound_profile(r: f64, tol: f64) -> Result<EvalResult> {
    Ok(lower_bound_terms(r, tol)?.value())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub r: f64,
    /// lower_bound_profile(r) √(1−r)
    pub scaled_profile: f64,
    /// leading term times √(1−r)
    pub scaled_leading: f64,
    /// subtracted term times √(1−r)
    pub scaled_subtracted: f64,
    pub upper_envelope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticReport {
    pub q: f64,
    pub q_residual: f64,
    pub lower_constant: f64,
    pub secondary_constant: f64,
    pub profile: Vec<ProfileRow>,
}

pub fn asymptotic_report(rs: &[f64], tol: f64) -> Result<AsymptoticReport> {
    let q = solve_q();
    let profile = rs
        .iter()
        .map(|&r| {
            let terms = lower_bound_terms(r, tol)?;
            let s = (1.0 - r).sqrt();
            Ok(ProfileRow {
                r,
                scaled_profile: terms.value().value * s,
                scaled_leading: terms.leading.value * s,
                scaled_subtracted: terms.subtracted.value * s,
                upper_envelope: upper_envelope(r)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AsymptoticReport {
        q,
        q_residual: q_equation(q),
        lower_constant: constant_for(q),
        secondary_constant: secondary_constant(),
        profile,
    })
}
