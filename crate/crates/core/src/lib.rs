//! Bohr radii for weighted majorant series of bounded analytic functions,
//! generalized Cesàro operators with their Bohr sums and majorants, and
//! numerical checks of sharpness and asymptotic constants.
//!
//! Every special-function and series evaluation returns an [`EvalResult`]
//! carrying an a posteriori error bound alongside the value.

pub mod asymptotics;
pub mod cesaro;
pub mod cli;
mod error;
pub mod radius;
mod roots;
pub mod series;
pub mod specfun;
pub mod verify;
pub mod weights;

pub use error::{BohrError, Result};
pub use series::TruncatedSeries;
pub use specfun::{EvalResult, DEFAULT_TOLERANCE};
pub use weights::WeightFamily;
