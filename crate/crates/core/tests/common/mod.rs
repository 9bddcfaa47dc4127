//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's own series or special-function code.

#![allow(dead_code)]

/// Adaptive Simpson quadrature of `f` on [a, b] to absolute tolerance `eps`.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, eps: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        eps: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * eps {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, lm, flm, left, 0.5 * eps, depth - 1)
            + recurse(f, m, fm, b, fb, rm, frm, right, 0.5 * eps, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, m, fm, whole, eps, 50)
}

/// Double integral ∫_0^r ∫_0^ρ g(s) ds dρ, written as
/// ∫_0^r (r − s) g(s) ds.
pub fn iterated_integral<F: Fn(f64) -> f64>(g: &F, r: f64, eps: f64) -> f64 {
    integrate(&|s| (r - s) * g(s), 0.0, r, eps)
}

/// Plain left-to-right sum of `n` terms produced by `term(k)`.
pub fn direct_sum<F: Fn(usize) -> f64>(n: usize, term: F) -> f64 {
    (0..n).map(term).sum()
}

/// (a)_k as an explicit product.
pub fn rising(a: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |p, i| p * (a + i as f64))
}

/// A_k^β = (β+1)_k / k!, as a ratio of explicit products.
pub fn binom_a(beta: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |p, i| p * (beta + 1.0 + i as f64) / (i as f64 + 1.0))
}

/// The Cesàro basis weight φ_n(r), by brute-force summation of `terms`
/// terms.
pub fn cesaro_phi(alpha: f64, n: usize, r: f64, terms: usize) -> f64 {
    (n..n + terms)
        .map(|k| binom_a(alpha, k - n) / binom_a(alpha + 1.0, k) * r.powi(k as i32))
        .sum()
}

/// Bisection to machine precision on a bracket with a sign change.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Golden-section maximization on [a, b].
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    while (b - a).abs() > tol {
        if f(c) > f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    0.5 * (a + b)
}

/// Values frozen from 40-digit mpmath evaluations.
pub mod reference {
    /// Γ(1/2)/Γ(3/4)², the Gauss sum F(1/4, 1/4; 1; 1).
    pub const GAUSS_QUARTER: f64 = 1.1803405990160962;
    /// ₃F₂(1,1,1; 3/2,3/2; 1/4).
    pub const HYP3F2_HALF_QUARTER: f64 = 1.1329687944178905;
    /// Root of Σ (2−2n)/(n+2) x^n = 0, the α = 1 Cesàro radius.
    pub const CESARO_RADIUS_ALPHA1: f64 = 0.6450074513345844;
    /// The same root at α = −0.99.
    pub const CESARO_RADIUS_ALPHA_M099: f64 = 0.3360280987792041;
    /// Root of (1−r)³ = 2r(1+r).
    pub const POWER2_RADIUS_P1: f64 = 0.20678349452781559;
    /// ₃F₂(1,1,1; c,c; 1) at the f64 values of c = 1.5001, 1.501, 1.6.
    pub const HYP3F2_EDGE_1_5001: f64 = 3927.818482835269;
    pub const HYP3F2_EDGE_1_501: f64 = 393.5268164971608;
    pub const HYP3F2_EDGE_1_6: f64 = 4.762034730760217;
    /// (x, Li₂(x)) pairs.
    pub const DILOG: [(f64, f64); 4] = [
        (0.3, 0.3261295100754761),
        (0.9, 1.2997147230049588),
        (0.99, 1.5886254480763753),
        (0.99999999, 1.644933872641417),
    ];
}
