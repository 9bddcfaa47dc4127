use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BohrError {
    #[error("{what} = {value} is outside the domain ({expected})")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("invalid parameters: {0}")]
    InvalidParameter(String),

    #[error("series diverges: {0}")]
    Divergent(String),

    #[error("no convergence after {iterations} iterations: {context}")]
    NoConvergence { context: String, iterations: usize },
}

impl BohrError {
    pub(crate) fn domain(what: &'static str, value: f64, expected: &'static str) -> Self {
        BohrError::Domain {
            what,
            value,
            expected,
        }
    }

    /// Errors caused by the caller's parameters rather than by numerics.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            BohrError::Domain { .. } | BohrError::InvalidParameter(_) | BohrError::Divergent(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, BohrError>;
