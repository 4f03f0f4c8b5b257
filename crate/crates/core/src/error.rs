use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The point lies outside the region where the evaluator is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A quadrature error estimate exceeded its tolerance.
    #[error("accuracy error: estimate {estimate:.3e} exceeds tolerance {tolerance:.3e} ({context})")]
    Accuracy {
        estimate: f64,
        tolerance: f64,
        context: String,
    },

    /// A sample evaluated to NaN or infinity.
    #[error("evaluation error: {0}")]
    Evaluation(String),

    #[error("pole error: evaluation at singular point {0}")]
    Pole(String),

    #[error("divergence: {0}")]
    Divergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain(_))
    }
}
