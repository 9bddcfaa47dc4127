//! Truncated power series and certified summation of series whose term
//! ratio is eventually dominated by a geometric rate.

use crate::error::{BohrError, Result};
use crate::specfun::EvalResult;

/// Hard cap on the number of terms any single series may consume.
pub(crate) const MAX_TERMS: usize = 1 << 26;

/// Neumaier-compensated running sum that also keeps what is needed for a
/// rounding-error bound.
///
/// Terms produced by a multiplicative recurrence carry a relative error that
/// grows linearly with the index, hence the `weighted` accumulator.
#[derive(Debug, Default, Clone)]
pub(crate) struct Accumulator {
    sum: f64,
    comp: f64,
    abs_sum: f64,
    weighted: f64,
    count: usize,
}

impl Accumulator {
    pub(crate) fn add(&mut self, term: f64) {
        let s = self.sum + term;
        if self.sum.abs() >= term.abs() {
            self.comp += (self.sum - s) + term;
        } else {
            self.comp += (term - s) + self.sum;
        }
        self.sum = s;
        self.abs_sum += term.abs();
        self.weighted += self.count as f64 * term.abs();
        self.count += 1;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }

    pub(crate) fn abs_sum(&self) -> f64 {
        self.abs_sum
    }

    pub(crate) fn count(&self) -> usize {
        self.count
    }

    pub(crate) fn rounding_bound(&self) -> f64 {
        let eps = f64::EPSILON;
        2.0 * eps * self.value().abs()
            + 8.0 * eps * self.weighted
            + self.count as f64 * eps * eps * self.abs_sum
    }
}

/// Sums `t_0 + t_1 + ...` where `next(k, t_k)` yields `t_{k+1}`.
///
/// `sup_ratio(k)` must return a bound on `|t_{j+1} / t_j|` valid for every
/// `j >= k`, or `None` while no such bound is available. Summation stops as
/// soon as the geometric tail `|t_k| rho / (1 - rho)` drops below `tol`, or
/// when a term is exactly zero (all later terms then vanish).
pub(crate) fn sum_series<N, S>(
    first: f64,
    mut next: N,
    sup_ratio: S,
    tol: f64,
    context: &str,
) -> Result<EvalResult>
where
    N: FnMut(usize, f64) -> f64,
    S: Fn(usize) -> Option<f64>,
{
    let mut acc = Accumulator::default();
    let mut term = first;
    let mut k = 0usize;
    loop {
        if !term.is_finite() {
            return Err(BohrError::Divergent(format!(
                "{context}: non-finite term at index {k}"
            )));
        }
        acc.add(term);
        if term == 0.0 {
            return Ok(EvalResult::new(acc.value(), acc.rounding_bound()));
        }
        if let Some(rho) = sup_ratio(k) {
            if rho < 1.0 {
                let tail = term.abs() * rho / (1.0 - rho);
                if tail <= tol {
                    return Ok(EvalResult::new(acc.value(), tail + acc.rounding_bound()));
                }
            }
        }
        if k >= MAX_TERMS {
            return Err(BohrError::NoConvergence {
                context: context.to_string(),
                iterations: k,
            });
        }
        term = next(k, term);
        k += 1;
    }
}

/// A finite list of real Taylor coefficients together with a bound on the
/// discarded tail `sum_{k > order} |a_k| rho^k` at the radius `rho` the
/// series was built for.
///
/// Exact polynomials carry a zero tail that is valid at every radius.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coefficients: Vec<f64>,
    tail_bound: f64,
    radius: f64,
    exact: bool,
}

impl TruncatedSeries {
    /// An exact polynomial. An empty list is the zero polynomial.
    pub fn polynomial(mut coefficients: Vec<f64>) -> Self {
        if coefficients.is_empty() {
            coefficients.push(0.0);
        }
        TruncatedSeries {
            coefficients,
            tail_bound: 0.0,
            radius: 0.0,
            exact: true,
        }
    }

    pub fn new(coefficients: Vec<f64>, tail_bound: f64, radius: f64) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(BohrError::InvalidParameter(
                "a truncated series needs at least one coefficient".into(),
            ));
        }
        if !(0.0..1.0).contains(&radius) {
            return Err(BohrError::domain("radius", radius, "0 <= radius < 1"));
        }
        if !(tail_bound >= 0.0 && tail_bound.is_finite()) {
            return Err(BohrError::domain(
                "tail_bound",
                tail_bound,
                "finite and >= 0",
            ));
        }
        Ok(TruncatedSeries {
            coefficients,
            tail_bound,
            radius,
            exact: false,
        })
    }

    /// `1/(1-z)` truncated after `z^order`, with its tail at `radius`.
    pub fn geometric(order: usize, radius: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&radius) {
            return Err(BohrError::domain("radius", radius, "0 <= radius < 1"));
        }
        let tail = radius.powi(order as i32 + 1) / (1.0 - radius);
        Self::new(vec![1.0; order + 1], tail, radius)
    }

    /// Attach an evaluation radius to an exact polynomial. Non-exact series
    /// may only shrink their radius.
    pub fn at_radius(mut self, radius: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&radius) {
            return Err(BohrError::domain("radius", radius, "0 <= radius < 1"));
        }
        if !self.exact && radius > self.radius {
            return Err(BohrError::domain(
                "radius",
                radius,
                "cannot exceed the radius the tail bound was built for",
            ));
        }
        self.radius = radius;
        Ok(self)
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn moduli(&self) -> Vec<f64> {
        self.coefficients.iter().map(|c| c.abs()).collect()
    }

    fn tail_at(&self, r: f64) -> Result<f64> {
        if self.exact {
            if !(0.0..=1.0).contains(&r) {
                return Err(BohrError::domain("r", r, "0 <= r <= 1"));
            }
            Ok(0.0)
        } else if (0.0..=self.radius).contains(&r) {
            Ok(self.tail_bound)
        } else {
            Err(BohrError::domain(
                "r",
                r,
                "must not exceed the radius of the tail bound",
            ))
        }
    }

    /// `sum a_k r^k`, with the tail bound folded into the error.
    pub fn eval(&self, r: f64) -> Result<EvalResult> {
        let tail = self.tail_at(r)?;
        let mut value = 0.0;
        let mut abs = 0.0;
        for &c in self.coefficients.iter().rev() {
            value = value * r + c;
            abs = abs * r + c.abs();
        }
        let rounding = 2.0 * (self.coefficients.len() as f64) * f64::EPSILON * abs;
        Ok(EvalResult::new(value, tail + rounding))
    }

    /// `sum |a_k| r^k`.
    pub fn eval_moduli(&self, r: f64) -> Result<EvalResult> {
        TruncatedSeries {
            coefficients: self.moduli(),
            ..self.clone()
        }
        .eval(r)
    }

    pub fn scale(&self, c: f64) -> Self {
        TruncatedSeries {
            coefficients: self.coefficients.iter().map(|a| c * a).collect(),
            tail_bound: c.abs() * self.tail_bound,
            ..self.clone()
        }
    }

    /// Coefficientwise sum. Both operands must have the same order; the
    /// result's tail is valid at the smaller of the two radii.
    pub fn plus(&self, other: &TruncatedSeries) -> Result<Self> {
        if self.order() != other.order() {
            return Err(BohrError::InvalidParameter(format!(
                "cannot add series of orders {} and {}",
                self.order(),
                other.order()
            )));
        }
        let coefficients = self
            .coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| a + b)
            .collect();
        let (radius, exact) = match (self.exact, other.exact) {
            (true, true) => (0.0, true),
            (true, false) => (other.radius, false),
            (false, true) => (self.radius, false),
            (false, false) => (self.radius.min(other.radius), false),
        };
        Ok(TruncatedSeries {
            coefficients,
            tail_bound: self.tail_bound + other.tail_bound,
            radius,
            exact,
        })
    }
}
