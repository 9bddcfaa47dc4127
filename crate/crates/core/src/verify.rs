//! Sharpness checks: Möbius extremals, random Schur-class coefficient
//! samples, and scans of the Bohr functional below and above a radius.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{BohrError, Result};
use crate::series::Accumulator;
use crate::specfun::EvalResult;
use crate::weights::WeightFamily;

/// Default number of Taylor coefficients kept for sampled functions.
pub const DEFAULT_ORDER: usize = 200;
/// Largest number of Blaschke factors drawn by [`sample_schur`].
pub const MAX_SAMPLE_DEGREE: usize = 4;

fn check_radius(r: f64) -> Result<()> {
    if (0.0..1.0).contains(&r) {
        Ok(())
    } else {
        Err(BohrError::domain("r", r, "0 <= r < 1"))
    }
}

/// Coefficient moduli of (z − a)/(1 − az): a, then (1−a²) a^{k−1}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MobiusWitness {
    pub a: f64,
    pub moduli: Vec<f64>,
}

impl MobiusWitness {
    /// Σ_{k>order} |a_k| r^k.
    pub fn tail_bound(&self, r: f64) -> f64 {
        let order = self.moduli.len() as i32 - 1;
        let a = self.a;
        (1.0 - a * a) * r.powi(order + 1) * a.powi(order) / (1.0 - a * r)
    }
}

pub fn mobius_moduli(a: f64, order: usize) -> Result<MobiusWitness> {
    if !(0.0..1.0).contains(&a) {
        return Err(BohrError::domain("a", a, "0 <= a < 1"));
    }
    let mut moduli = Vec::with_capacity(order + 1);
    moduli.push(a);
    let mut m = 1.0 - a * a;
    for _ in 1..=order {
        moduli.push(m);
        m *= a;
    }
    Ok(MobiusWitness { a, moduli })
}

/// Truncation order max(200, ⌈log(tol)/log(max(a, r))⌉) for Möbius
/// coefficient lists.
pub fn witness_order(a: f64, r: f64, tol: f64) -> usize {
    let x = a.max(r);
    if x <= 0.0 {
        return DEFAULT_ORDER;
    }
    let need = (tol.ln() / x.ln()).ceil();
    DEFAULT_ORDER.max(need as usize)
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(BohrError::domain("p", p, "p > 0"))
    }
}

/// |a_0|^p φ_0 + Σ_{k≥1} |a_k| φ_k from precomputed weights φ_0..φ_n.
/// Moduli beyond the weight list are ignored.
pub fn bohr_functional_from_weights(phi: &[f64], p: f64, moduli: &[f64]) -> f64 {
    let Some(&m0) = moduli.first() else {
        return 0.0;
    };
    let mut acc = Accumulator::default();
    acc.add(m0.powf(p) * phi[0]);
    for (m, w) in moduli.iter().zip(phi).skip(1) {
        acc.add(m * w);
    }
    acc.value()
}

/// B_f(φ, p, r) = |a_0|^p φ_0(r) + Σ_{k≥1} |a_k| φ_k(r) for a finite list
/// of moduli.
pub fn bohr_functional(
    w: &WeightFamily,
    p: f64,
    moduli: &[f64],
    r: f64,
    tol: f64,
) -> Result<EvalResult> {
    check_radius(r)?;
    check_p(p)?;
    if moduli.is_empty() {
        return Ok(EvalResult::exact(0.0));
    }
    let phi = w.weights_upto(moduli.len() - 1, r, tol)?;
    let value = bohr_functional_from_weights(&phi, p, moduli);
    let abs: f64 = moduli.iter().zip(&phi).map(|(m, f)| m * f).sum::<f64>() + phi[0];
    // each φ_k carries an error of at most tol
    let mass: f64 = moduli.iter().sum();
    let err = 4.0 * moduli.len() as f64 * f64::EPSILON * abs + (mass + 1.0) * tol;
    Ok(EvalResult::new(value, err))
}

/// B_f for the Möbius map (z−a)/(1−az) without truncation:
/// a^p φ_0 + (1−a²) Σ_{k≥1} a^{k−1} φ_k.
pub fn mobius_functional(w: &WeightFamily, p: f64, a: f64, r: f64, tol: f64) -> Result<EvalResult> {
    check_radius(r)?;
    check_p(p)?;
    if !(0.0..1.0).contains(&a) {
        return Err(BohrError::domain("a", a, "0 <= a < 1"));
    }
    let phi0 = w.phi0(r, tol)?;
    if a == 0.0 {
        return w.weight(1, r, tol);
    }
    // Σ_{k≥1} a^{k−1} φ_k = (G(a, r) − φ_0)/a
    let rest = (w.generating_sum(a, r, tol)? - phi0).scale(1.0 / a);
    Ok(phi0.scale(a.powf(p)) + rest.scale((1.0 - a) * (1.0 + a)))
}

/// Taylor coefficients of a random finite Blaschke product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchurSample {
    pub seed: u64,
    /// e.g. `blaschke(degree=3)`
    pub descriptor: String,
    pub zeros: Vec<(f64, f64)>,
    pub moduli: Vec<f64>,
}

/// Coefficients 0..=order of λ ∏_j (z − a_j)/(1 − ā_j z).
pub fn blaschke_coefficients(
    zeros: &[Complex64],
    unimodular: Complex64,
    order: usize,
) -> Vec<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let mut num = vec![unimodular];
    let mut den = vec![Complex64::new(1.0, 0.0)];
    for &a in zeros {
        num = multiply(&num, &[-a, Complex64::new(1.0, 0.0)]);
        den = multiply(&den, &[Complex64::new(1.0, 0.0), -a.conj()]);
    }
    // num = den · out, den[0] = 1
    let mut out = vec![zero; order + 1];
    for n in 0..=order {
        let mut c = num.get(n).copied().unwrap_or(zero);
        for k in 1..den.len().min(n + 1) {
            c -= den[k] * out[n - k];
        }
        out[n] = c;
    }
    out
}

fn multiply(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// A Blaschke product of random degree 0..=[`MAX_SAMPLE_DEGREE`] with zeros
/// of modulus √U and uniform argument, times a random unimodular constant.
pub fn sample_schur(seed: u64, order: usize) -> SchurSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let degree = rng.gen_range(0..=MAX_SAMPLE_DEGREE);
    let zeros: Vec<Complex64> = (0..degree)
        .map(|_| {
            let rad = rng.gen::<f64>().sqrt();
            let arg = rng.gen::<f64>() * std::f64::consts::TAU;
            Complex64::from_polar(rad, arg)
        })
        .collect();
    let lambda = Complex64::from_polar(1.0, rng.gen::<f64>() * std::f64::consts::TAU);
    schur_from_zeros(seed, &zeros, lambda, order)
}

fn schur_from_zeros(
    seed: u64,
    zeros: &[Complex64],
    lambda: Complex64,
    order: usize,
) -> SchurSample {
    let coeffs = blaschke_coefficients(zeros, lambda, order);
    let mut moduli: Vec<f64> = coeffs.iter().map(|c| c.norm()).collect();
    // clamp rounding noise so the Schwarz–Pick bound holds exactly
    moduli[0] = moduli[0].min(1.0);
    let cap = 1.0 - moduli[0] * moduli[0];
    for m in moduli.iter_mut().skip(1) {
        *m = m.min(cap);
    }
    SchurSample {
        seed,
        descriptor: format!("blaschke(degree={})", zeros.len()),
        zeros: zeros.iter().map(|z| (z.re, z.im)).collect(),
        moduli,
    }
}

/// A sample with prescribed zeros and unimodular constant λ = 1.
pub fn schur_with_zeros(zeros: &[Complex64], order: usize) -> SchurSample {
    schur_from_zeros(0, zeros, Complex64::new(1.0, 0.0), order)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationGrid {
    /// Number of r values in (0, R] for the below-radius check.
    pub below_points: usize,
    /// Möbius parameters used below the radius.
    pub mobius_a: Vec<f64>,
    /// Random Schur samples used below the radius.
    pub schur_samples: usize,
    pub seed: u64,
    /// Offsets δ for the violation search at r = R + δ.
    pub deltas: Vec<f64>,
    /// The violation search tries a = 1 − 2^{−j} for j = 1..=max_j.
    pub max_j: u32,
    pub tolerance: f64,
}

impl Default for CertificationGrid {
    fn default() -> Self {
        let mut mobius_a: Vec<f64> = (0..10).map(|i| i as f64 / 10.0).collect();
        mobius_a.extend((1..=20).map(|j| 1.0 - 0.5f64.powi(j)));
        CertificationGrid {
            below_points: 20,
            mobius_a,
            schur_samples: 50,
            seed: 0,
            deltas: vec![1e-3, 1e-2],
            max_j: 20,
            tolerance: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ViolationWitness {
    pub r: f64,
    pub a: f64,
    pub bohr_functional: f64,
    pub phi0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificationStatus {
    /// Below-radius check passed and a violation above the radius was found.
    Certified,
    /// Below-radius check passed but no violation was found above.
    Inconclusive,
    /// Some sampled function broke the inequality below the radius.
    BelowRadiusFailure,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub family: String,
    pub p: f64,
    pub radius: f64,
    pub grid: CertificationGrid,
    /// max of B_f(r) − φ_0(r) over every sampled f and r ≤ R.
    pub max_below_slack: f64,
    pub violation: Option<ViolationWitness>,
    pub status: CertificationStatus,
}

/// Allowed excess of B_f over φ_0 below the radius.
pub const BELOW_SLACK: f64 = 1e-9;

/// Checks B_f ≤ φ_0 for sampled f and r ≤ R, then searches for a Möbius
/// witness with B_f > φ_0 at r = R + δ.
pub fn certify_radius(
    w: &WeightFamily,
    p: f64,
    radius: f64,
    grid: &CertificationGrid,
) -> Result<CertificationReport> {
    check_p(p)?;
    check_radius(radius)?;
    let tol = grid.tolerance;
    let rs: Vec<f64> = (1..=grid.below_points)
        .map(|i| radius * i as f64 / grid.below_points as f64)
        .collect();
    let samples: Vec<SchurSample> = (0..grid.schur_samples as u64)
        .map(|i| sample_schur(grid.seed.wrapping_add(i), DEFAULT_ORDER))
        .collect();

    let slacks = rs
        .par_iter()
        .map(|&r| -> Result<f64> {
            let phi = w.weights_upto(DEFAULT_ORDER, r, tol)?;
            let mut worst = f64::NEG_INFINITY;
            for &a in &grid.mobius_a {
                let b = mobius_functional(w, p, a, r, tol)?;
                worst = worst.max(b.value - phi[0]);
            }
            for s in &samples {
                worst = worst.max(bohr_functional_from_weights(&phi, p, &s.moduli) - phi[0]);
            }
            Ok(worst)
        })
        .collect::<Result<Vec<f64>>>()?;
    let max_below_slack = slacks.into_iter().fold(f64::NEG_INFINITY, f64::max);

    let mut violation = None;
    'search: for &delta in &grid.deltas {
        let r = radius + delta;
        if r >= 1.0 {
            continue;
        }
        let phi0 = w.phi0(r, tol)?;
        for j in 1..=grid.max_j {
            let a = 1.0 - 0.5f64.powi(j as i32);
            let b = mobius_functional(w, p, a, r, tol)?;
            if b.lower() > phi0.upper() {
                violation = Some(ViolationWitness {
                    r,
                    a,
                    bohr_functional: b.value,
                    phi0: phi0.value,
                });
                break 'search;
            }
        }
    }

    let status = if max_below_slack > BELOW_SLACK {
        CertificationStatus::BelowRadiusFailure
    } else if violation.is_some() {
        CertificationStatus::Certified
    } else {
        CertificationStatus::Inconclusive
    };
    Ok(CertificationReport {
        family: w.label(),
        p,
        radius,
        grid: grid.clone(),
        max_below_slack,
        violation,
        status,
    })
}
