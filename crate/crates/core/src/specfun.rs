//! Special functions with a posteriori error bounds: log-gamma, gamma,
//! digamma, trigamma, Pochhammer symbols, ₂F₁, the ₃F₂(1,1,1; c,c; z)
//! family, the Lerch transcendent and the dilogarithm.
//!
//! Series are summed by their term recurrence. A series stops only once a
//! bound on all later term ratios certifies that the remaining tail is
//! below the requested tolerance.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{BohrError, Result};
use crate::series::{sum_series, Accumulator};

/// Absolute tolerance used when the caller does not pick one.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const PI2_6: f64 = PI * PI / 6.0;

/// A value together with an absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: f64,
    pub error_bound: f64,
}

fn ulp_of(v: f64) -> f64 {
    f64::EPSILON * v.abs()
}

impl EvalResult {
    pub fn new(value: f64, error_bound: f64) -> Self {
        EvalResult {
            value,
            error_bound: error_bound.abs(),
        }
    }

    pub fn exact(value: f64) -> Self {
        EvalResult::new(value, 0.0)
    }

    /// Whether `x` lies within `error_bound` of the value.
    pub fn contains(&self, x: f64) -> bool {
        (self.value - x).abs() <= self.error_bound
    }

    pub fn lower(&self) -> f64 {
        self.value - self.error_bound
    }

    pub fn upper(&self) -> f64 {
        self.value + self.error_bound
    }

    pub fn scale(self, c: f64) -> Self {
        let value = c * self.value;
        EvalResult::new(value, c.abs() * self.error_bound + ulp_of(value))
    }

    /// Square root. A slightly negative radicand within its own error bound
    /// is clamped to zero.
    pub fn sqrt(self) -> Self {
        let x = self.value.max(0.0);
        let e = self.error_bound;
        let value = x.sqrt();
        let err = if x > e {
            e / (value + (x - e).sqrt())
        } else {
            (x + e).sqrt()
        };
        EvalResult::new(value, err + ulp_of(value))
    }
}

impl Add for EvalResult {
    type Output = EvalResult;
    fn add(self, rhs: EvalResult) -> EvalResult {
        let value = self.value + rhs.value;
        EvalResult::new(value, self.error_bound + rhs.error_bound + ulp_of(value))
    }
}

impl Sub for EvalResult {
    type Output = EvalResult;
    fn sub(self, rhs: EvalResult) -> EvalResult {
        self + (-rhs)
    }
}

impl Neg for EvalResult {
    type Output = EvalResult;
    fn neg(self) -> EvalResult {
        EvalResult::new(-self.value, self.error_bound)
    }
}

impl Mul for EvalResult {
    type Output = EvalResult;
    fn mul(self, rhs: EvalResult) -> EvalResult {
        let value = self.value * rhs.value;
        let err = self.value.abs() * rhs.error_bound
            + rhs.value.abs() * self.error_bound
            + self.error_bound * rhs.error_bound
            + ulp_of(value);
        EvalResult::new(value, err)
    }
}

impl Mul<f64> for EvalResult {
    type Output = EvalResult;
    fn mul(self, rhs: f64) -> EvalResult {
        self.scale(rhs)
    }
}

fn check_positive(what: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(BohrError::domain(what, x, "finite and > 0"))
    }
}

pub(crate) fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// B_{2k} / (2k (2k-1)) for k = 1..8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Natural logarithm of Γ(x) for x > 0.
///
/// Shifts the argument up to at least 15 and applies the Stirling series;
/// the first omitted term is below 1e-20 there.
pub fn ln_gamma(x: f64) -> Result<EvalResult> {
    check_positive("x", x)?;
    let mut y = x;
    let mut prod = 1.0;
    let mut shift = 0.0;
    while y < 15.0 {
        prod *= y;
        y += 1.0;
        if prod > 1e280 {
            shift += prod.ln();
            prod = 1.0;
        }
    }
    shift += prod.ln();

    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut pow = inv;
    for c in STIRLING {
        series += c * pow;
        pow *= inv2;
    }
    let stirling = (y - 0.5) * y.ln() - y + LN_SQRT_2PI + series;
    let value = stirling - shift;
    let err = 4.0 * f64::EPSILON * (stirling.abs() + shift.abs()) + 1e-20;
    Ok(EvalResult::new(value, err))
}

/// lnΓ(x+h) − lnΓ(x) for x ≥ 15 and |h| ≤ 2, without the cancellation of
/// differencing two large logarithms.
pub(crate) fn ln_gamma_ratio(x: f64, h: f64) -> f64 {
    let y = x + h;
    // (y − 1/2) ln y − (x − 1/2) ln x − h, regrouped
    let main = (x - 0.5) * (h / x).ln_1p() + h * y.ln() - h;
    let (iy, ix) = (1.0 / y, 1.0 / x);
    let (iy2, ix2) = (iy * iy, ix * ix);
    let (mut py, mut px) = (iy, ix);
    let mut series = 0.0;
    for c in STIRLING {
        series += c * (py - px);
        py *= iy2;
        px *= ix2;
    }
    main + series
}

/// sin(πx) with exact argument reduction.
fn sin_pi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0);
    if r <= 0.5 {
        (PI * r).sin()
    } else if r <= 1.5 {
        (PI * (1.0 - r)).sin()
    } else {
        -(PI * (2.0 - r)).sin()
    }
}

/// Γ(x) for real x away from the poles at 0, -1, -2, ...
pub fn gamma(x: f64) -> Result<EvalResult> {
    if !x.is_finite() {
        return Err(BohrError::domain("x", x, "finite"));
    }
    if is_nonpositive_integer(x) {
        return Err(BohrError::domain("x", x, "not a pole of gamma"));
    }
    if x > 171.6 {
        return Err(BohrError::domain(
            "x",
            x,
            "gamma overflows f64 beyond 171.6",
        ));
    }
    if x > 0.0 {
        let l = ln_gamma(x)?;
        let value = l.value.exp();
        let err = value * l.error_bound.exp_m1() + 2.0 * ulp_of(value);
        return Ok(EvalResult::new(value, err));
    }
    // Γ(x) = π / (sin(πx) Γ(1-x))
    let g = gamma(1.0 - x)?;
    let s = sin_pi(x);
    let value = PI / (s * g.value);
    let rel = g.error_bound / g.value.abs() + 4.0 * f64::EPSILON * (1.0 + 1.0 / s.abs());
    Ok(EvalResult::new(value, value.abs() * rel))
}

/// 1/Γ(x), which is zero at the poles of Γ.
pub fn rgamma(x: f64) -> Result<EvalResult> {
    if is_nonpositive_integer(x) {
        return Ok(EvalResult::exact(0.0));
    }
    let g = gamma(x)?;
    let value = 1.0 / g.value;
    let rel = g.error_bound / g.value.abs();
    Ok(EvalResult::new(value, value.abs() * (rel + f64::EPSILON)))
}

/// B_{2k} / (2k) for k = 1..7.
const DIGAMMA_ASYMP: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
];

/// B_{2k} for k = 1..7.
const BERNOULLI_EVEN: [f64; 7] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
];

const ASYMPTOTIC_SHIFT: f64 = 10.0;

/// ψ(x) = Γ'(x)/Γ(x) for x > 0, by upward recurrence and the asymptotic
/// expansion.
pub fn digamma(x: f64) -> Result<EvalResult> {
    check_positive("x", x)?;
    let mut y = x;
    let mut acc = 0.0;
    let mut mag = 0.0;
    while y < ASYMPTOTIC_SHIFT {
        acc -= 1.0 / y;
        mag += 1.0 / y;
        y += 1.0;
    }
    let inv2 = 1.0 / (y * y);
    let mut pow = inv2;
    let mut series = 0.0;
    for c in DIGAMMA_ASYMP {
        series += c * pow;
        pow *= inv2;
    }
    let ln_y = y.ln();
    let value = acc + ln_y - 0.5 / y - series;
    let err = 4.0 * f64::EPSILON * (mag + ln_y.abs() + 1.0) + 1e-16;
    Ok(EvalResult::new(value, err))
}

/// ψ'(x) for x > 0. Equals Γ''(x)/Γ(x) − (Γ'(x)/Γ(x))².
pub fn trigamma(x: f64) -> Result<EvalResult> {
    check_positive("x", x)?;
    let mut y = x;
    let mut acc = 0.0;
    while y < ASYMPTOTIC_SHIFT {
        acc += 1.0 / (y * y);
        y += 1.0;
    }
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let mut pow = inv2 * inv;
    let mut series = 0.0;
    for b in BERNOULLI_EVEN {
        series += b * pow;
        pow *= inv2;
    }
    let value = acc + inv + 0.5 * inv2 + series;
    let err = 4.0 * f64::EPSILON * value.abs() + 1e-16;
    Ok(EvalResult::new(value, err))
}

/// Rising factorial (a)_k = a (a+1) ... (a+k-1), with (a)_0 = 1.
pub fn pochhammer(a: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |p, i| p * (a + f64::from(i)))
}

/// Sum of Σ_k z^k Π_i (n_i)_k / (d_i)_k for parameter pairs (n_i, d_i).
/// Pairing a numerator with a denominator gives a ratio factor
/// (n+j)/(d+j) that is monotone in j once both are positive, so its
/// supremum over later indices is max(value now, 1).
fn hypergeometric_pairs(
    pairs: &[(f64, f64)],
    z: f64,
    tol: f64,
    context: &str,
) -> Result<EvalResult> {
    let next = |k: usize, t: f64| {
        let kf = k as f64;
        let mut ratio = z;
        for &(n, d) in pairs {
            if n + kf == 0.0 {
                return 0.0;
            }
            ratio *= (n + kf) / (d + kf);
        }
        t * ratio
    };
    let sup = |k: usize| {
        let kf = k as f64;
        let mut rho = z.abs();
        for &(n, d) in pairs {
            if n + kf <= 0.0 || d + kf <= 0.0 {
                return None;
            }
            rho *= ((n + kf) / (d + kf)).max(1.0);
        }
        Some(rho)
    };
    sum_series(1.0, next, sup, tol, context)
}

/// Gauss hypergeometric function ₂F₁(a, b; c; z) for real parameters.
///
/// Uses the power series for |z| < 1 (any z when the series terminates) and
/// Gauss's summation Γ(c)Γ(c−a−b)/(Γ(c−a)Γ(c−b)) at z = 1 when c > a + b.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64, tol: f64) -> Result<EvalResult> {
    for (what, v) in [("a", a), ("b", b), ("c", c), ("z", z)] {
        if !v.is_finite() {
            return Err(BohrError::domain(what, v, "finite"));
        }
    }
    let terminating = is_nonpositive_integer(a) || is_nonpositive_integer(b);
    if is_nonpositive_integer(c) {
        let m = -c;
        let ok = (is_nonpositive_integer(a) && -a <= m) || (is_nonpositive_integer(b) && -b <= m);
        if !ok {
            return Err(BohrError::InvalidParameter(format!(
                "c = {c} is a non-positive integer and the series does not terminate before it"
            )));
        }
    }
    if terminating {
        return hypergeometric_pairs(&[(a, c), (b, 1.0)], z, tol, "2F1 polynomial");
    }
    if z == 1.0 {
        if c <= a + b {
            return Err(BohrError::Divergent(format!(
                "2F1({a}, {b}; {c}; 1) needs c > a + b"
            )));
        }
        return gauss_sum(a, b, c);
    }
    if z.abs() >= 1.0 {
        return Err(BohrError::domain(
            "z",
            z,
            "|z| < 1, or z = 1 with c > a + b",
        ));
    }
    hypergeometric_pairs(&[(a, c), (b, 1.0)], z, tol, "2F1")
}

fn gauss_sum(a: f64, b: f64, c: f64) -> Result<EvalResult> {
    let args = [c, c - a - b, c - a, c - b];
    if args.iter().all(|&x| x > 0.0) {
        let l = ln_gamma(args[0])? + ln_gamma(args[1])? - ln_gamma(args[2])? - ln_gamma(args[3])?;
        let value = l.value.exp();
        let err = value * l.error_bound.exp_m1() + 2.0 * ulp_of(value);
        return Ok(EvalResult::new(value, err));
    }
    Ok(gamma(args[0])? * gamma(args[1])? * rgamma(args[2])? * rgamma(args[3])?)
}

/// ₃F₂(1, 1, 1; c, c; z) = Σ_k ((1)_k / (c)_k)² z^k for z ∈ [0, 1].
///
/// At z = 1 the series converges only when 2c − 3 > 0, and then only
/// algebraically; the tail is bracketed with a Kummer-type telescoping
/// bound instead of a geometric one.
pub fn hyp3f2_unit_params(c: f64, z: f64, tol: f64) -> Result<EvalResult> {
    if !c.is_finite() || is_nonpositive_integer(c) {
        return Err(BohrError::InvalidParameter(format!(
            "c = {c} must be finite and not a non-positive integer"
        )));
    }
    if !(0.0..=1.0).contains(&z) {
        return Err(BohrError::domain("z", z, "0 <= z <= 1"));
    }
    if z < 1.0 {
        return hypergeometric_pairs(&[(1.0, c), (1.0, c), (1.0, 1.0)], z, tol, "3F2");
    }
    if 2.0 * c - 3.0 <= 0.0 {
        return Err(BohrError::Divergent(format!(
            "3F2(1,1,1; {c},{c}; 1) needs 2c - 3 > 0"
        )));
    }
    Ok(unit_argument_sum(c, tol))
}

/// Kummer coefficient for the unit-argument sum: with b_j = j + d and
/// d = 3(c−1)/2, the telescoping defect
/// b_j − b_{j+1} t_{j+1}/t_j equals `excess + e0/(j+c)²`.
pub(crate) fn kummer_defect(c: f64) -> (f64, f64, f64) {
    let excess = 2.0 * c - 3.0;
    let d = 1.5 * (c - 1.0);
    let e0 = d * (c * c - 1.0) - 1.0 - c * c * excess;
    (excess, d, e0)
}

fn unit_argument_sum(c: f64, tol: f64) -> EvalResult {
    const CHECK_EVERY: usize = 256;
    const CAP: usize = 1 << 24;
    let (excess, d, e0) = kummer_defect(c);
    // Σ_{j≥k} t_j (b_j − b_{j+1} ρ_j) = b_k t_k telescopes, and the defect
    // lies between its value at k and its limit.
    // The recurrence for t_k drifts by O(k ε) relative, which 1/(2c−3)
    // would amplify; at check points t_k = (Γ(k+1)Γ(c)/Γ(k+c))² is
    // recomputed from a log-gamma ratio instead.
    let ln_gamma_c = ln_gamma(c).map(|v| v.value).unwrap_or(f64::NAN);
    let bracket = |k: usize| -> Option<(f64, f64)> {
        let kf = k as f64;
        if kf + 1.0 < 15.0 {
            return None;
        }
        let g_k = excess + e0 / ((kf + c) * (kf + c));
        let (g_min, g_max) = (g_k.min(excess), g_k.max(excess));
        if g_min <= 0.0 || kf + d <= 0.0 {
            return None;
        }
        let ln_t = 2.0 * (ln_gamma_c - ln_gamma_ratio(kf + 1.0, c - 1.0));
        let t = ln_t.exp();
        let bt = (kf + d) * t;
        let rel = 16.0 * f64::EPSILON * (1.0 + ln_t.abs() + 2.0 * ln_gamma_c.abs());
        Some((bt / g_max * (1.0 - rel), bt / g_min * (1.0 + rel)))
    };

    let mut acc = Accumulator::default();
    let mut t = 1.0;
    let mut k = 0usize;
    let mut last = None;
    loop {
        if k > 0 && k.is_multiple_of(CHECK_EVERY) {
            if let Some((lo, hi)) = bracket(k) {
                let half = 0.5 * (hi - lo) + 4.0 * f64::EPSILON * hi;
                last = Some((lo, hi));
                if half + acc.rounding_bound() <= tol || k >= CAP {
                    let value = acc.value() + 0.5 * (lo + hi);
                    return EvalResult::new(value, half + acc.rounding_bound());
                }
            }
        }
        if k >= CAP {
            // The bracket was never valid; report an honest, loose bound.
            let (lo, hi) = last.unwrap_or((0.0, f64::INFINITY));
            return EvalResult::new(acc.value() + lo, hi - lo);
        }
        acc.add(t);
        let kf = k as f64;
        let q = (kf + 1.0) / (kf + c);
        t *= q * q;
        k += 1;
    }
}

/// Lerch transcendent Φ(z, s, a) = Σ_{n≥0} z^n (n + a)^{−s} for
/// 0 ≤ z < 1 and a > 0.
pub fn lerch_phi(z: f64, s: f64, a: f64, tol: f64) -> Result<EvalResult> {
    if !(0.0..1.0).contains(&z) {
        return Err(BohrError::domain("z", z, "0 <= z < 1"));
    }
    check_positive("a", a)?;
    if !s.is_finite() {
        return Err(BohrError::domain("s", s, "finite"));
    }
    let factor = |n: usize| {
        let nf = n as f64;
        ((nf + a) / (nf + 1.0 + a)).powf(s)
    };
    sum_series(
        a.powf(-s),
        |n, t| t * z * factor(n),
        |n| Some(z * factor(n).max(1.0)),
        tol,
        "Lerch transcendent",
    )
}

/// Dilogarithm Li₂(x) = Σ_{k≥1} x^k / k² for x ∈ [0, 1].
pub fn dilog(x: f64, tol: f64) -> Result<EvalResult> {
    if !(0.0..=1.0).contains(&x) {
        return Err(BohrError::domain("x", x, "0 <= x <= 1"));
    }
    if x == 1.0 {
        return Ok(EvalResult::new(PI2_6, ulp_of(PI2_6)));
    }
    if x > 0.5 {
        // Li₂(x) = π²/6 − log x log(1−x) − Li₂(1−x); 1 − x is exact here
        let y = 1.0 - x;
        let prod = x.ln() * y.ln();
        let rest = dilog(y, tol)?;
        let value = PI2_6 - prod - rest.value;
        let rounding = 4.0 * f64::EPSILON * (PI2_6 + prod.abs() + rest.value.abs());
        return Ok(EvalResult::new(value, rest.error_bound + rounding));
    }
    // term index k ↦ x^{k+1} / (k+1)²
    sum_series(
        x,
        |k, t| {
            let q = (k as f64 + 1.0) / (k as f64 + 2.0);
            t * x * q * q
        },
        |_| Some(x),
        tol,
        "dilogarithm",
    )
}
