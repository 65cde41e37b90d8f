use thiserror::Error;

/// Errors raised by the spectral pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum FockError {
    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("quadrature order {order} exceeds the supported maximum {max}")]
    OrderTooLarge { order: usize, max: usize },

    #[error("grid scale {grid} does not match the {convention} convention (expected {expected})")]
    ScaleMismatch {
        grid: f64,
        expected: f64,
        convention: &'static str,
    },

    #[error("grid dimension {got} does not match the expected dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("basis convention mismatch: expected {expected}, got {got}")]
    ConventionMismatch { expected: &'static str, got: &'static str },

    #[error("evaluation overflows the f64 range at x = {re} + {im}i")]
    Overflow { re: f64, im: f64 },

    #[error("integral diverges for s = {s}, K = {k}: {reason}")]
    Divergent { s: f64, k: u32, reason: String },

    #[error("power iteration did not converge after {iterations} iterations; norm in [{lower}, {upper}]")]
    NormNotConverged { lower: f64, upper: f64, iterations: usize },

    #[error("adaptive quadrature did not reach tolerance {tol} (estimated error {err})")]
    QuadratureFailed { tol: f64, err: f64 },

    #[error("unknown multiplier `{0}`")]
    UnknownMultiplier(String),

    #[error("calibration: {0}")]
    Calibration(String),

    #[error("matrix format: {0}")]
    Format(String),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, FockError>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> FockError {
    FockError::InvalidArgument {
        name,
        reason: reason.into(),
    }
}
