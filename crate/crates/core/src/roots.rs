//! Scan-then-bisect location of the first sign change of a function.

use crate::error::{BohrError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

fn changes_sign(a: f64, b: f64) -> bool {
    (a > 0.0 && b <= 0.0) || (a < 0.0 && b >= 0.0)
}

/// Walks `grid` in order and returns the first adjacent pair across which
/// `f` changes sign (an exact zero counts as a change).
pub(crate) fn first_sign_change<F, I>(mut f: F, grid: I) -> Result<Option<Bracket>>
where
    F: FnMut(f64) -> Result<f64>,
    I: IntoIterator<Item = f64>,
{
    let mut prev: Option<(f64, f64)> = None;
    for x in grid {
        let fx = f(x)?;
        if let Some((xp, fp)) = prev {
            if fp == 0.0 {
                return Ok(Some(Bracket {
                    lo: xp,
                    hi: xp,
                    f_lo: fp,
                    f_hi: fp,
                }));
            }
            if changes_sign(fp, fx) {
                return Ok(Some(Bracket {
                    lo: xp,
                    hi: x,
                    f_lo: fp,
                    f_hi: fx,
                }));
            }
        }
        prev = Some((x, fx));
    }
    Ok(None)
}

/// Uniform grid `lo, lo + step, ...` ending exactly at `hi`.
pub(crate) fn uniform_grid(lo: f64, hi: f64, step: f64) -> impl Iterator<Item = f64> {
    let n = ((hi - lo) / step).floor() as usize;
    (0..=n)
        .map(move |i| lo + i as f64 * step)
        .filter(move |&x| x < hi)
        .chain(std::iter::once(hi))
}

/// Bisects a sign-change bracket until its width is at most `tol`.
/// Returns the midpoint, the final bracket and the iteration count.
pub(crate) fn bisect<F>(mut f: F, bracket: Bracket, tol: f64) -> Result<(f64, Bracket, usize)>
where
    F: FnMut(f64) -> Result<f64>,
{
    const MAX_ITER: usize = 200;
    let mut b = bracket;
    let mut iterations = 0;
    while b.hi - b.lo > tol {
        if iterations >= MAX_ITER {
            return Err(BohrError::NoConvergence {
                context: "bisection".into(),
                iterations,
            });
        }
        let mid = 0.5 * (b.lo + b.hi);
        if mid <= b.lo || mid >= b.hi {
            break;
        }
        let fm = f(mid)?;
        iterations += 1;
        if fm == 0.0 {
            b = Bracket {
                lo: mid,
                hi: mid,
                f_lo: 0.0,
                f_hi: 0.0,
            };
            break;
        }
        if changes_sign(b.f_lo, fm) {
            b.hi = mid;
            b.f_hi = fm;
        } else {
            b.lo = mid;
            b.f_lo = fm;
        }
    }
    Ok((0.5 * (b.lo + b.hi), b, iterations))
}
