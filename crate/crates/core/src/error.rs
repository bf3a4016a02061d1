//! Error type shared by all modules.

use thiserror::Error;

/// Errors raised by the channel-model computations.
#[derive(Debug, Clone, Error)]
pub enum ModelError {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical procedure did not converge within its budget.
    #[error("numerical error: {message} (residual estimate {residual:.3e})")]
    Numerical { message: String, residual: f64 },

    /// A scenario or file configuration violates an invariant.
    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },
}

impl ModelError {
    pub fn domain(msg: impl Into<String>) -> Self {
        ModelError::Domain(msg.into())
    }

    pub fn config(field: impl Into<String>, msg: impl Into<String>) -> Self {
        ModelError::Config {
            field: field.into(),
            message: msg.into(),
        }
    }
}
