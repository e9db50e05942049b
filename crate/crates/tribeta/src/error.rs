use thiserror::Error;

/// Errors shared by the sampling, spectral, and experiment layers.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violated its documented constraint; the offending name is kept
    /// so CLI validation can point at the right key.
    #[error("invalid parameter `{name}`: {message}")]
    InvalidParameter { name: &'static str, message: String },

    /// Structurally invalid input (length mismatch, NaN entry, out-of-region z, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An iterative routine failed to converge; carries the last residual.
    #[error("numerical failure: {message} (residual {residual:.3e})")]
    NumericalFailure { message: String, residual: f64 },
}

impl Error {
    pub fn param(name: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
