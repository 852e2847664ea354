use thiserror::Error;

/// Errors raised by geometry, operator, resolvent and scheme code.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the mathematical domain of the operation
    /// (mismatched spaces, out-of-range parameters, invalid points).
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation is not available for this space or set kind.
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// A schedule or scheme configuration violates a convergence hypothesis.
    #[error("configuration error: {0}")]
    Config(String),

    /// An inner solver failed to reach its tolerance.
    #[error("solver error: {message}")]
    Solver {
        message: String,
        residual: Option<f64>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn solver(msg: impl Into<String>, residual: Option<f64>) -> Self {
        Error::Solver {
            message: msg.into(),
            residual,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
