use thiserror::Error;

use crate::sdp::SdpError;

/// Errors raised by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("not Hermitian (asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("matrix is singular on the working support (min eigenvalue {0:e})")]
    Singular(f64),

    #[error("function undefined on spectrum: {0}")]
    UndefinedOnSpectrum(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("state file: {0}")]
    Format(String),

    #[error("semidefinite solver: {0}")]
    Solver(#[from] SdpError),

    #[error("frank-wolfe failed: {0}")]
    FrankWolfe(String),
}

pub type Result<T> = std::result::Result<T, Error>;
