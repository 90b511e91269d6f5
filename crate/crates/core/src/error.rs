use thiserror::Error;

/// Errors produced by the dominance library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid affine transform: scale must be nonzero and finite")]
    InvalidTransform,

    #[error("sample sizes differ: |A| = {a}, |B| = {b}")]
    SizeMismatch { a: usize, b: usize },

    #[error("sample is empty")]
    EmptySample,

    #[error("non-finite observation at index {index}")]
    NonFinite { index: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numerical integration did not converge (best estimate {best_estimate}, error {error_estimate})")]
    NumericFailure { best_estimate: f64, error_estimate: f64 },

    #[error("dominance density is undefined for almost-everywhere equal models")]
    UndefinedDensity,

    #[error("curve and band grids differ: {curve} vs {band} knots")]
    GridMismatch { curve: usize, band: usize },

    #[error("mixture spec: {0}")]
    Spec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
