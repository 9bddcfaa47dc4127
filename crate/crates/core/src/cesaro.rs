//! The α-Cesàro operator
//!
//! C^α f(z) = Σ_n (1/A_n^{α+1}) Σ_{k≤n} A_{n−k}^α a_k z^n,
//!
//! with A_k^α = (α+1)_k / k!, together with its Bohr sum, the Lerch-type
//! majorant and the four-regime bound S_α(r).

use num_complex::Complex64;

use crate::error::{BohrError, Result};
use crate::series::{sum_series, Accumulator, TruncatedSeries};
use crate::specfun::{gamma, hyp3f2_unit_params, lerch_phi, trigamma, EvalResult};
use crate::weights::check_alpha;

/// Order α together with cached A_k^α and A_k^{α+1} for k ≤ order.
#[derive(Debug, Clone, PartialEq)]
pub struct CesaroContext {
    alpha: f64,
    a: Vec<f64>,
    a_next: Vec<f64>,
}

/// A_0^β, …, A_n^β from A_{k+1}^β = A_k^β (β+k+1)/(k+1).
fn binomial_coefficients(beta: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut v = 1.0;
    out.push(v);
    for k in 0..n {
        let kf = k as f64;
        v *= (beta + kf + 1.0) / (kf + 1.0);
        out.push(v);
    }
    out
}

fn check_radius(r: f64) -> Result<()> {
    if (0.0..1.0).contains(&r) {
        Ok(())
    } else {
        Err(BohrError::domain("r", r, "0 <= r < 1"))
    }
}

impl CesaroContext {
    pub fn new(alpha: f64, order: usize) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(CesaroContext {
            alpha,
            a: binomial_coefficients(alpha, order),
            a_next: binomial_coefficients(alpha + 1.0, order),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn cached_order(&self) -> usize {
        self.a.len() - 1
    }

    fn extended(&self, n: usize) -> std::borrow::Cow<'_, Self> {
        if n <= self.cached_order() {
            std::borrow::Cow::Borrowed(self)
        } else {
            std::borrow::Cow::Owned(CesaroContext {
                alpha: self.alpha,
                a: binomial_coefficients(self.alpha, n),
                a_next: binomial_coefficients(self.alpha + 1.0, n),
            })
        }
    }

    /// A_k^α.
    pub fn a_coeff(&self, k: usize) -> f64 {
        match self.a.get(k) {
            Some(&v) => v,
            None => binomial_coefficients(self.alpha, k)[k],
        }
    }

    /// A_k^{α+1}.
    pub fn a_next_coeff(&self, k: usize) -> f64 {
        match self.a_next.get(k) {
            Some(&v) => v,
            None => binomial_coefficients(self.alpha + 1.0, k)[k],
        }
    }

    /// Coefficient n of C^α applied to the coefficient list `a`, treating
    /// entries beyond the list as zero.
    fn averaged<T>(&self, coeffs: &[T], n: usize) -> T
    where
        T: Copy + std::ops::Mul<f64, Output = T> + std::iter::Sum<T>,
    {
        let count = (n + 1).min(coeffs.len());
        let s: T = (0..count).map(|k| coeffs[k] * self.a[n - k]).sum();
        s * (1.0 / self.a_next[n])
    }

    /// C^α f on coefficients 0..=N, where N is the order of `f`.
    ///
    /// The discarded output tail at f's radius ρ is bounded by
    /// (max_k |a_k| ρ^{N+1} + T)/(1 − ρ), T being f's own tail bound: each
    /// output coefficient is a convex combination of input coefficients, and
    /// a_k with k > N reaches the output only through φ_k(ρ) ≤ ρ^k/(1−ρ).
    pub fn apply_operator(&self, f: &TruncatedSeries) -> Result<TruncatedSeries> {
        let n = f.order();
        let ctx = self.extended(n);
        let coeffs = f.coefficients();
        let out: Vec<f64> = (0..=n).map(|i| ctx.averaged(coeffs, i)).collect();
        let rho = f.radius();
        let max = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let tail = (max * rho.powi(n as i32 + 1) + f.tail_bound()) / (1.0 - rho);
        TruncatedSeries::new(out, tail, rho)
    }

    /// C^α f(z) for a polynomial f with complex coefficients. The error
    /// bound covers the truncation of the infinite output series.
    pub fn operator_value(
        &self,
        coeffs: &[Complex64],
        z: Complex64,
        tol: f64,
    ) -> Result<(Complex64, f64)> {
        let r = z.norm();
        check_radius(r)?;
        let max = coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()));
        let n = self.truncation_order(max, r, tol);
        let ctx = self.extended(n);
        let mut value = Complex64::new(0.0, 0.0);
        let mut zn = Complex64::new(1.0, 0.0);
        let mut abs = 0.0;
        for i in 0..=n {
            let c = ctx.averaged(coeffs, i);
            value += c * zn;
            abs += c.norm() * r.powi(i as i32);
            zn *= z;
        }
        let tail = max * r.powi(n as i32 + 1) / (1.0 - r);
        Ok((value, tail + 4.0 * (n as f64 + 1.0) * f64::EPSILON * abs))
    }

    /// Smallest N with max·r^{N+1}/(1−r) ≤ tol.
    fn truncation_order(&self, max: f64, r: f64, tol: f64) -> usize {
        if max == 0.0 || r == 0.0 {
            return 0;
        }
        let needed = (tol * (1.0 - r) / max).ln() / r.ln() - 1.0;
        needed.max(0.0).ceil() as usize
    }

    /// Bohr sum Σ_n r^n (1/A_n^{α+1}) Σ_{k≤n} A_{n−k}^α |a_k| for the
    /// finite list of moduli.
    pub fn bohr_sum(&self, moduli: &[f64], r: f64, tol: f64) -> Result<EvalResult> {
        check_radius(r)?;
        if let Some(&bad) = moduli.iter().find(|m| !(**m >= 0.0 && m.is_finite())) {
            return Err(BohrError::domain("modulus", bad, "finite and >= 0"));
        }
        let max = moduli.iter().fold(0.0f64, |m, &c| m.max(c));
        let n = self.truncation_order(max, r, tol);
        let ctx = self.extended(n);
        let mut acc = Accumulator::default();
        let mut rn = 1.0;
        for i in 0..=n {
            acc.add(ctx.averaged(moduli, i) * rn);
            rn *= r;
        }
        let tail = if max == 0.0 {
            0.0
        } else {
            max * rn / (1.0 - r)
        };
        let rounding =
            acc.rounding_bound() + 4.0 * (moduli.len() as f64 + 1.0) * f64::EPSILON * acc.abs_sum();
        Ok(EvalResult::new(acc.value(), tail + rounding))
    }

    /// (α+1) Φ(r, 1, α+1), the bound on |C^α f| over the Schur class.
    pub fn lerch_majorant(&self, r: f64, tol: f64) -> Result<EvalResult> {
        check_radius(r)?;
        Ok(lerch_phi(r, 1.0, self.alpha + 1.0, tol)?.scale(self.alpha + 1.0))
    }

    /// Whether the Bohr sum of `moduli` stays below S_α(r), up to the
    /// combined error bounds.
    pub fn majorant_dominates(&self, r: f64, moduli: &[f64], tol: f64) -> Result<bool> {
        let sum = self.bohr_sum(moduli, r, tol)?;
        let s = s_alpha_majorant(self.alpha, r, tol)?;
        Ok(sum.value <= s.value + sum.error_bound + s.error_bound)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MajorantRegime {
    /// α ≥ 0
    NonNegative,
    /// −1/2 < α < 0
    UpperNegative,
    /// α = −1/2
    Half,
    /// −1 < α < −1/2
    LowerNegative,
}

impl MajorantRegime {
    pub fn of(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(if alpha >= 0.0 {
            MajorantRegime::NonNegative
        } else if alpha > -0.5 {
            MajorantRegime::UpperNegative
        } else if alpha == -0.5 {
            MajorantRegime::Half
        } else {
            MajorantRegime::LowerNegative
        })
    }
}

/// The bound S_α(r) on the Bohr sum of C^α over f with Σ|a_n|² ≤ 1.
///
/// * α ≥ 0: ((α+1)/(1−r²)) √(ψ′(1+α) − r² Φ(r², 2, 1+α))
/// * −1/2 < α < 0: (1/(1−r²)) √(₃F₂(1,1,1;2+α,2+α;1) − r² ₃F₂(1,1,1;2+α,2+α;r²))
/// * α = −1/2: (1/(1−r)) √(₃F₂(1,1,1;3/2,3/2;r²))
/// * −1 < α < −1/2: (Γ(α+2)/Γ(−α)) √(Γ(−1−2α) Σ_n (n+1)^{1−2α}/(n+α+1)² r^{2n})
pub fn s_alpha_majorant(alpha: f64, r: f64, tol: f64) -> Result<EvalResult> {
    check_radius(r)?;
    let r2 = r * r;
    Ok(match MajorantRegime::of(alpha)? {
        MajorantRegime::NonNegative => {
            let inner = trigamma(1.0 + alpha)? - lerch_phi(r2, 2.0, 1.0 + alpha, tol)?.scale(r2);
            inner.sqrt().scale((alpha + 1.0) / (1.0 - r2))
        }
        MajorantRegime::UpperNegative => {
            let c = 2.0 + alpha;
            let inner =
                hyp3f2_unit_params(c, 1.0, tol)? - hyp3f2_unit_params(c, r2, tol)?.scale(r2);
            inner.sqrt().scale(1.0 / (1.0 - r2))
        }
        MajorantRegime::Half => hyp3f2_unit_params(1.5, r2, tol)?
            .sqrt()
            .scale(1.0 / (1.0 - r)),
        MajorantRegime::LowerNegative => {
            let e = 1.0 - 2.0 * alpha;
            let ratio = move |n: usize| {
                let nf = n as f64;
                let q = (nf + alpha + 1.0) / (nf + alpha + 2.0);
                ((nf + 2.0) / (nf + 1.0)).powf(e) * q * q
            };
            let series = sum_series(
                1.0 / ((alpha + 1.0) * (alpha + 1.0)),
                |n, t| t * r2 * ratio(n),
                // ((n+2)/(n+1))^e decreases in n and the other factor is < 1
                |n| {
                    let nf = n as f64;
                    Some(r2 * ((nf + 2.0) / (nf + 1.0)).powf(e))
                },
                tol,
                "lower-regime majorant series",
            )?;
            let g = gamma(-1.0 - 2.0 * alpha)?;
            let pre = gamma(alpha + 2.0)? * gamma(-alpha)?.recip_checked()?;
            (g * series).sqrt() * pre
        }
    })
}

trait EvalExt: Sized {
    fn recip_checked(self) -> Result<Self>;
}

impl EvalExt for EvalResult {
    fn recip_checked(self) -> Result<EvalResult> {
        if self.lower() <= 0.0 && self.upper() >= 0.0 {
            return Err(BohrError::InvalidParameter(
                "reciprocal of a value whose error interval contains 0".into(),
            ));
        }
        let v = 1.0 / self.value;
        let m = self.value.abs() - self.error_bound;
        Ok(EvalResult::new(
            v,
            self.error_bound / (self.value.abs() * m) + f64::EPSILON * v.abs(),
        ))
    }
}
