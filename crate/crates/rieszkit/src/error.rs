use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// Two operands live in different orthonormal bases.
    #[error("basis mismatch: `{left}` vs `{right}`")]
    BasisMismatch { left: String, right: String },

    /// Dimensions of two operands do not agree.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// A matrix is singular or too ill-conditioned to invert.
    #[error("singular or ill-conditioned matrix (estimated condition number {cond:.3e}, guard {guard:.3e})")]
    Singular { cond: f64, guard: f64 },

    /// A sampled value was not finite.
    #[error("non-finite value encountered at x = {at}")]
    NonFinite { at: f64 },

    /// Invalid configuration value.
    #[error("configuration error: {0}")]
    Config(String),

    /// Operator-expression parse failure, with byte offset into the source.
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    /// A `diag(...)` node referenced a sequence that is not registered.
    #[error("unknown alpha sequence `{0}`")]
    UnknownSequence(String),

    /// Model name not one of the built-in models.
    #[error("unknown model `{0}`")]
    UnknownModel(String),

    /// Operation contract violated (precondition failure).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
