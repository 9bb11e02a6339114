use thiserror::Error;

use crate::linalg::{FormatError, Interval};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (defect {defect:e} exceeds {tol:e})")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("matrix is not positive semidefinite (minimum eigenvalue {min_eig:e})")]
    NotPsd { min_eig: f64 },

    #[error("{0} did not converge")]
    NonConvergence(&'static str),

    #[error("eigenvalue {value} lies outside the domain {interval}")]
    SpectrumViolation { value: f64, interval: Interval },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("C does not factor through A^1/2 and B^1/2 (reconstruction error {0:e})")]
    NotFactorizable(f64),

    #[error("map `{map}` does not satisfy the precondition: {requirement}")]
    MapPrecondition { map: String, requirement: String },

    #[error("hypothesis `{name}` violated: {detail}")]
    Hypothesis { name: String, detail: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error(transparent)]
    Format(#[from] FormatError),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn hypothesis(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Hypothesis {
            name: name.into(),
            detail: detail.into(),
        }
    }

    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }
}
