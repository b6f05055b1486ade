use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by the structured-matrix routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("singular matrix: smallest |eigenvalue| {min_abs:e} against largest {max_abs:e}")]
    Singular { min_abs: f64, max_abs: f64 },

    #[error("matrix is not Hermitian: {0}")]
    NotHermitian(String),

    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("value {value} lies outside the domain of {function} (radius of convergence {radius})")]
    OutsideDomain {
        function: String,
        value: Complex64,
        radius: f64,
    },

    #[error("eigensolver did not converge within {sweeps} implicit-shift sweeps")]
    NoConvergence { sweeps: usize },

    #[error("operator is not positive definite: <p, Ap> = {curvature:e} at iteration {iteration}")]
    Indefinite { iteration: usize, curvature: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Failures of the numerics on otherwise valid input, as opposed to bad
    /// input or configuration.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Self::Singular { .. } | Self::NoConvergence { .. } | Self::Indefinite { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}
