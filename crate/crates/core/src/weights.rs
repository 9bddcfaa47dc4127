//! Nonnegative weight families {φ_k(r)} entering the generalized Bohr
//! functional |a_0|^p φ_0(r) + Σ_{k≥1} |a_k| φ_k(r).

use serde::{Deserialize, Serialize};

use crate::error::{BohrError, Result};
use crate::series::{sum_series, Accumulator};
use crate::specfun::{hyp2f1, lerch_phi, EvalResult};

pub use crate::series::TruncatedSeries;

/// Number of hypergeometric coefficients inspected when checking that they
/// share one sign.
pub const SIGN_CHECK_TERMS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightKind {
    /// φ_k(r) = r^k
    Monomial,
    /// φ_k(r) = (k+1) r^k
    ShiftedMonomial,
    /// φ_0 = 1, φ_k(r) = k^α r^k
    PowerWeight { alpha: f64 },
    /// φ_k(r) = |γ_k| r^k with γ_k the Taylor coefficients of ₂F₁(a,b;c;z)
    HypergeometricCoeff { a: f64, b: f64, c: f64 },
    /// φ_n(r) = Σ_{k≥n} A_{k−n}^α / A_k^{α+1} r^k
    CesaroBasis { alpha: f64 },
}

/// A validated weight family. Immutable once built.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightFamily {
    kind: WeightKind,
}

fn check_radius(r: f64) -> Result<()> {
    if (0.0..1.0).contains(&r) {
        Ok(())
    } else {
        Err(BohrError::domain("r", r, "0 <= r < 1"))
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > -1.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(BohrError::domain("alpha", alpha, "alpha > -1"))
    }
}

fn closed(value: f64) -> EvalResult {
    EvalResult::new(value, 8.0 * f64::EPSILON * value.abs())
}

impl WeightFamily {
    pub fn monomial() -> Self {
        WeightFamily {
            kind: WeightKind::Monomial,
        }
    }

    pub fn shifted_monomial() -> Self {
        WeightFamily {
            kind: WeightKind::ShiftedMonomial,
        }
    }

    pub fn power(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(BohrError::domain("alpha", alpha, "finite"));
        }
        Ok(WeightFamily {
            kind: WeightKind::PowerWeight { alpha },
        })
    }

    /// Coefficients of ₂F₁(a,b;c;z). Requires a, b, c > −1, c ≠ 0, and all
    /// γ_k of the same sign as γ_0 = 1.
    ///
    /// The sign is checked on the first [`SIGN_CHECK_TERMS`] coefficients.
    /// Beyond k = 1 every factor of γ_{k+1}/γ_k = (a+k)(b+k)/((c+k)(k+1)) is
    /// positive once a, b, c > −1, which certifies the rest.
    pub fn hypergeometric(a: f64, b: f64, c: f64) -> Result<Self> {
        for (what, v) in [("a", a), ("b", b), ("c", c)] {
            if !(v > -1.0 && v.is_finite()) {
                return Err(BohrError::domain(what, v, "> -1"));
            }
        }
        if c == 0.0 {
            return Err(BohrError::InvalidParameter("c = 0 is a pole of 2F1".into()));
        }
        let gammas = hypergeometric_coefficients(a, b, c, SIGN_CHECK_TERMS);
        if let Some(k) = gammas.iter().position(|&g| g < 0.0) {
            return Err(BohrError::InvalidParameter(format!(
                "coefficient gamma_{k} of F({a},{b};{c};z) is negative; all coefficients must share the sign of gamma_0 = 1"
            )));
        }
        Ok(WeightFamily {
            kind: WeightKind::HypergeometricCoeff { a, b, c },
        })
    }

    pub fn cesaro(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(WeightFamily {
            kind: WeightKind::CesaroBasis { alpha },
        })
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    /// Short human-readable label, e.g. `cesaro(alpha=0)`.
    pub fn label(&self) -> String {
        match self.kind {
            WeightKind::Monomial => "monomial".into(),
            WeightKind::ShiftedMonomial => "shifted".into(),
            WeightKind::PowerWeight { alpha } => format!("power(alpha={alpha})"),
            WeightKind::HypergeometricCoeff { a, b, c } => {
                format!("hypergeom(a={a},b={b},c={c})")
            }
            WeightKind::CesaroBasis { alpha } => format!("cesaro(alpha={alpha})"),
        }
    }

    /// φ_k(r) with an error bound (non-zero only for truncated families).
    pub fn weight(&self, k: usize, r: f64, tol: f64) -> Result<EvalResult> {
        check_radius(r)?;
        let rk = r.powi(k as i32);
        Ok(match self.kind {
            WeightKind::Monomial => EvalResult::exact(rk),
            WeightKind::ShiftedMonomial => closed((k as f64 + 1.0) * rk),
            WeightKind::PowerWeight { alpha } => {
                if k == 0 {
                    EvalResult::exact(1.0)
                } else {
                    closed((k as f64).powf(alpha) * rk)
                }
            }
            WeightKind::HypergeometricCoeff { a, b, c } => {
                let g = hypergeometric_coefficients(a, b, c, k)[k];
                closed(g.abs() * rk).scale(1.0 + 4.0 * k as f64 * f64::EPSILON)
            }
            WeightKind::CesaroBasis { alpha } => cesaro_basis(alpha, k, r, tol)?,
        })
    }

    /// φ_k(r) at the default tolerance.
    pub fn weight_at(&self, k: usize, r: f64) -> Result<f64> {
        Ok(self.weight(k, r, crate::DEFAULT_TOLERANCE)?.value)
    }

    /// φ_0(r) .. φ_n(r) as plain values.
    pub fn weights_upto(&self, n: usize, r: f64, tol: f64) -> Result<Vec<f64>> {
        check_radius(r)?;
        match self.kind {
            WeightKind::HypergeometricCoeff { a, b, c } => {
                let mut rk = 1.0;
                Ok(hypergeometric_coefficients(a, b, c, n)
                    .into_iter()
                    .map(|g| {
                        let w = g.abs() * rk;
                        rk *= r;
                        w
                    })
                    .collect())
            }
            _ => (0..=n)
                .map(|k| self.weight(k, r, tol).map(|w| w.value))
                .collect(),
        }
    }

    pub fn phi0(&self, r: f64, tol: f64) -> Result<EvalResult> {
        self.weight(0, r, tol)
    }

    /// Σ_{k≥1} φ_k(r), in closed form where one is known.
    pub fn tail_sum(&self, r: f64, tol: f64) -> Result<EvalResult> {
        check_radius(r)?;
        let q = 1.0 - r;
        Ok(match self.kind {
            WeightKind::Monomial => closed(r / q),
            WeightKind::ShiftedMonomial => closed(r * (2.0 - r) / (q * q)),
            WeightKind::PowerWeight { alpha: 1.0 } => closed(r / (q * q)),
            WeightKind::PowerWeight { alpha: 2.0 } => closed(r * (1.0 + r) / (q * q * q)),
            WeightKind::PowerWeight { alpha } => power_weight_tail(alpha, r, tol)?,
            WeightKind::HypergeometricCoeff { a, b, c } => {
                let f = hyp2f1(a, b, c, r, tol)?;
                let d = f - EvalResult::exact(1.0);
                EvalResult::new(d.value.abs(), d.error_bound)
            }
            WeightKind::CesaroBasis { alpha } => {
                let phi0 = lerch_phi(r, 1.0, alpha + 1.0, tol)?.scale(alpha + 1.0);
                closed(1.0 / q) - phi0
            }
        })
    }

    /// Generating sum G(t, r) = Σ_{k≥0} t^k φ_k(r) for t ∈ [0, 1).
    ///
    /// The Bohr functional of the Möbius map (z−a)/(1−az) is
    /// a^p φ_0 + (1−a²)(G(a, r) − φ_0)/a, so this gives witnesses with a
    /// arbitrarily close to 1 without truncating their coefficients.
    pub fn generating_sum(&self, t: f64, r: f64, tol: f64) -> Result<EvalResult> {
        check_radius(r)?;
        if !(0.0..1.0).contains(&t) {
            return Err(BohrError::domain("t", t, "0 <= t < 1"));
        }
        let x = t * r;
        Ok(match self.kind {
            WeightKind::Monomial => closed(1.0 / (1.0 - x)),
            WeightKind::ShiftedMonomial => closed(1.0 / ((1.0 - x) * (1.0 - x))),
            WeightKind::PowerWeight { .. } => {
                closed(1.0) + WeightFamily { kind: self.kind }.tail_sum(x, tol)?
            }
            WeightKind::HypergeometricCoeff { a, b, c } => hyp2f1(a, b, c, x, tol)?,
            WeightKind::CesaroBasis { alpha } => cesaro_generating_sum(alpha, t, r, tol)?,
        })
    }
}

/// Σ_n r^n c_n / A_n^{α+1} with c_n = Σ_{j≤n} A_j^α t^{n−j}. Each ratio
/// c_n / A_n^{α+1} lies in [0, 1], so the tail after n is below r^{n+1}/(1−r).
fn cesaro_generating_sum(alpha: f64, t: f64, r: f64, tol: f64) -> Result<EvalResult> {
    let mut acc = Accumulator::default();
    let (mut a_alpha, mut a_next, mut c) = (1.0, 1.0, 1.0);
    let mut r_pow = 1.0;
    let mut n = 0usize;
    loop {
        acc.add(r_pow * c / a_next);
        r_pow *= r;
        let tail = r_pow / (1.0 - r);
        if r_pow == 0.0 || tail <= tol {
            let err = tail + acc.rounding_bound() + 4.0 * f64::EPSILON * acc.abs_sum();
            return Ok(EvalResult::new(acc.value(), err));
        }
        if acc.count() > crate::series::MAX_TERMS {
            return Err(BohrError::NoConvergence {
                context: "Cesaro generating sum".into(),
                iterations: acc.count(),
            });
        }
        let nf = n as f64;
        a_alpha *= (alpha + nf + 1.0) / (nf + 1.0);
        a_next *= (alpha + nf + 2.0) / (nf + 1.0);
        c = t * c + a_alpha;
        n += 1;
    }
}

/// γ_0 .. γ_n for ₂F₁(a,b;c;z).
pub fn hypergeometric_coefficients(a: f64, b: f64, c: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut g = 1.0;
    out.push(g);
    for i in 0..n {
        let k = i as f64;
        g *= (a + k) * (b + k) / ((c + k) * (k + 1.0));
        out.push(g);
    }
    out
}

fn power_weight_tail(alpha: f64, r: f64, tol: f64) -> Result<EvalResult> {
    // term index i ↦ k = i + 1
    let ratio = move |i: usize| {
        let k = i as f64 + 1.0;
        ((k + 1.0) / k).powf(alpha)
    };
    sum_series(
        r,
        |i, t| t * r * ratio(i),
        |i| Some(r * ratio(i).max(1.0)),
        tol,
        "power weight tail",
    )
}

/// Cesàro basis function φ_n(r) = Σ_{k≥n} A_{k−n}^α / A_k^{α+1} r^k.
///
/// Every coefficient A_{k−n}^α / A_k^{α+1} is at most 1 for α > −1, so the
/// tail after index k is below r^{k+1}/(1−r).
pub fn cesaro_basis(alpha: f64, n: usize, r: f64, tol: f64) -> Result<EvalResult> {
    check_alpha(alpha)?;
    check_radius(r)?;
    // A_n^{α+1}
    let mut a_next = 1.0;
    for i in 0..n {
        let k = i as f64;
        a_next *= (alpha + 2.0 + k) / (k + 1.0);
    }
    let mut acc = Accumulator::default();
    let mut term = r.powi(n as i32) / a_next;
    let mut r_pow = r.powi(n as i32 + 1);
    let mut j = 0usize;
    loop {
        acc.add(term);
        let tail = r_pow / (1.0 - r);
        if term == 0.0 || tail <= tol {
            let tail = if term == 0.0 { 0.0 } else { tail };
            let err = tail + acc.rounding_bound() + 4.0 * n as f64 * f64::EPSILON * acc.abs_sum();
            return Ok(EvalResult::new(acc.value(), err));
        }
        if acc.count() > crate::series::MAX_TERMS {
            return Err(BohrError::NoConvergence {
                context: "Cesaro basis function".into(),
                iterations: acc.count(),
            });
        }
        let jf = j as f64;
        let k = (n + j) as f64;
        term *= r * (alpha + jf + 1.0) / (jf + 1.0) * (k + 1.0) / (alpha + k + 2.0);
        r_pow *= r;
        j += 1;
    }
}

/// Σ_{n≥0} φ_n(r) for the Cesàro basis, which is 1/(1−r) for every α > −1
/// since C^α fixes 1/(1−z).
pub fn cesaro_full_sum(alpha: f64, r: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_radius(r)?;
    Ok(1.0 / (1.0 - r))
}
