//! Bohr radii as minimal positive roots of φ_0(x) = λ Σ_{k≥1} φ_k(x), where
//! λ = 2/p for p ≤ 2 and λ = 1 for p > 2.

use serde::{Deserialize, Serialize};

use crate::error::{BohrError, Result};
use crate::roots::{bisect, first_sign_change, uniform_grid};
use crate::specfun::{hyp2f1, lerch_phi, DEFAULT_TOLERANCE};
use crate::weights::{check_alpha, WeightFamily, WeightKind};

/// Step of the sign-change scan.
pub const SCAN_STEP: f64 = 1e-3;
/// The scan covers [0, 1 − SCAN_GAP].
pub const SCAN_GAP: f64 = 1e-6;
/// Series inside the defining function are summed to this fraction of the
/// bisection tolerance.
const SERIES_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusProblem {
    pub weights: WeightFamily,
    pub p: f64,
    pub tolerance: f64,
}

impl RadiusProblem {
    pub fn new(weights: WeightFamily, p: f64) -> Result<Self> {
        Self::with_tolerance(weights, p, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(weights: WeightFamily, p: f64, tolerance: f64) -> Result<Self> {
        if !(p > 0.0 && p.is_finite()) {
            return Err(BohrError::domain("p", p, "p > 0"));
        }
        if !(tolerance > 0.0 && tolerance < 1.0) {
            return Err(BohrError::domain(
                "tolerance",
                tolerance,
                "0 < tolerance < 1",
            ));
        }
        Ok(RadiusProblem {
            weights,
            p,
            tolerance,
        })
    }

    /// 2/p for p ≤ 2, and 1 beyond.
    pub fn factor(&self) -> f64 {
        exponent_factor(self.p)
    }

    fn series_tolerance(&self) -> f64 {
        SERIES_FRACTION * self.tolerance
    }

    /// g(x) = φ_0(x) − λ Σ_{k≥1} φ_k(x).
    pub fn defining_function(&self, x: f64) -> Result<f64> {
        let tol = self.series_tolerance();
        let phi0 = self.weights.phi0(x, tol)?;
        let tail = self.weights.tail_sum(x, tol)?;
        Ok(phi0.value - self.factor() * tail.value)
    }
}

pub fn exponent_factor(p: f64) -> f64 {
    if p <= 2.0 {
        2.0 / p
    } else {
        1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootResult {
    pub radius: f64,
    pub residual: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RadiusOutcome {
    Found(RootResult),
    /// The defining function keeps its sign on [0, 1 − SCAN_GAP].
    NoRadiusBelowOne,
}

impl RadiusOutcome {
    pub fn root(&self) -> Option<&RootResult> {
        match self {
            RadiusOutcome::Found(r) => Some(r),
            RadiusOutcome::NoRadiusBelowOne => None,
        }
    }

    /// The root, or an error for callers that need one.
    pub fn expect_root(self) -> Result<RootResult> {
        match self {
            RadiusOutcome::Found(r) => Ok(r),
            RadiusOutcome::NoRadiusBelowOne => Err(BohrError::InvalidParameter(
                "the defining equation has no root below 1".into(),
            )),
        }
    }
}

/// Smallest root of `g` on the scan grid, refined by bisection. The
/// reported residual is the smaller of |g| at the two final bracket ends.
pub(crate) fn minimal_root<F>(mut g: F, tol: f64) -> Result<RadiusOutcome>
where
    F: FnMut(f64) -> Result<f64>,
{
    let grid = uniform_grid(0.0, 1.0 - SCAN_GAP, SCAN_STEP);
    let Some(bracket) = first_sign_change(&mut g, grid)? else {
        return Ok(RadiusOutcome::NoRadiusBelowOne);
    };
    let (mid, fin, iterations) = bisect(&mut g, bracket, tol)?;
    let g_mid = g(mid)?;
    let (radius, residual) = [(mid, g_mid), (fin.lo, fin.f_lo), (fin.hi, fin.f_hi)]
        .into_iter()
        .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .expect("three candidates");
    Ok(RadiusOutcome::Found(RootResult {
        radius,
        residual,
        bracket: (fin.lo, fin.hi),
        iterations,
    }))
}

/// Minimal positive root of φ_0(x) = λ Σ_{k≥1} φ_k(x).
pub fn general_radius(prob: &RadiusProblem) -> Result<RadiusOutcome> {
    let g0 = prob.defining_function(0.0)?;
    if g0 <= 0.0 {
        return Err(BohrError::InvalidParameter(format!(
            "defining function must be positive at 0, got {g0}"
        )));
    }
    if let WeightKind::HypergeometricCoeff { a, b, c } = prob.weights.kind() {
        // |F(x) − 1| increases to |F(1) − 1| when F converges at 1
        if c > a + b {
            let at_one = hyp2f1(a, b, c, 1.0, prob.series_tolerance())?;
            if prob.factor() * (at_one.upper() - 1.0).abs() < 1.0 {
                return Ok(RadiusOutcome::NoRadiusBelowOne);
            }
        }
    }
    minimal_root(|x| prob.defining_function(x), prob.tolerance)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClosedForm {
    /// φ_k = r^k: p/(2+p)
    R1,
    /// φ_k = (k+1) r^k: 1 − √(2/(2+p))
    R2,
    /// φ_k = k r^k: (p+1−√(2p+1))/p
    R3,
}

impl ClosedForm {
    pub fn family(self) -> WeightFamily {
        match self {
            ClosedForm::R1 => WeightFamily::monomial(),
            ClosedForm::R2 => WeightFamily::shifted_monomial(),
            ClosedForm::R3 => WeightFamily::power(1.0).expect("finite exponent"),
        }
    }
}

pub fn closed_form_radius(kind: ClosedForm, p: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 2.0) {
        return Err(BohrError::domain("p", p, "0 < p <= 2"));
    }
    Ok(match kind {
        ClosedForm::R1 => p / (2.0 + p),
        ClosedForm::R2 => 1.0 - (2.0 / (2.0 + p)).sqrt(),
        ClosedForm::R3 => (p + 1.0 - (2.0 * p + 1.0).sqrt()) / p,
    })
}

/// Minimal positive root of |F(a,b;c;x) − 1| = p/2.
pub fn hypergeometric_radius(a: f64, b: f64, c: f64, p: f64, tol: f64) -> Result<RadiusOutcome> {
    let w = WeightFamily::hypergeometric(a, b, c)?;
    general_radius(&RadiusProblem::with_tolerance(w, p, tol)?)
}

/// 1 − (2/(2+p))^{1/a}, the root for F(a,1;1;x) = (1−x)^{−a}.
pub fn hypergeometric_closed_form(a: f64, p: f64) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(BohrError::domain("a", a, "a > 0"));
    }
    if !(p > 0.0 && p <= 2.0) {
        return Err(BohrError::domain("p", p, "0 < p <= 2"));
    }
    Ok(1.0 - (2.0 / (2.0 + p)).powf(1.0 / a))
}

/// Σ_{n≥0} (α+1−2n)/(n+α+1) x^n, evaluated as 3(α+1)Φ(x,1,α+1) − 2/(1−x).
pub fn cesaro_radius_function(alpha: f64, x: f64, tol: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let phi = lerch_phi(x, 1.0, alpha + 1.0, tol)?;
    Ok(3.0 * (alpha + 1.0) * phi.value - 2.0 / (1.0 - x))
}

/// Bohr radius of the α-Cesàro operator: minimal positive root of
/// Σ_{n≥0} (α+1−2n)/(n+α+1) x^n = 0.
///
/// As α → −1 the coefficients tend to 1, −2, −2, …, so the root tends to
/// 1/3; the Lerch term converges slowly there but the solver is unchanged.
pub fn cesaro_radius(alpha: f64, tol: f64) -> Result<RootResult> {
    check_alpha(alpha)?;
    let series_tol = SERIES_FRACTION * tol;
    minimal_root(|x| cesaro_radius_function(alpha, x, series_tol), tol)?.expect_root()
}

/// A(x) = (1 − x^p)/(1 − x²), with its limit p/2 at x = 1.
pub fn auxiliary_a(x: f64, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(BohrError::domain("x", x, "0 <= x <= 1"));
    }
    if x == 1.0 {
        return Ok(p / 2.0);
    }
    let ln = x.ln();
    // −expm1 keeps precision as x → 1
    Ok(-(p * ln).exp_m1() / -(2.0 * ln).exp_m1())
}
