use num_complex::Complex64;
use thiserror::Error;

/// Failures raised by the analysis kernels.
///
/// Data problems in a network description are not errors: they are collected
/// in a [`ValidationReport`](crate::model::ValidationReport).
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: String,
        expected: String,
        found: String,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("eigensolver did not converge for {what}")]
    NoConvergence { what: String },

    #[error("unstable rank decision at eigenvalue {lambda}: {detail}")]
    RankInstability { lambda: Complex64, detail: String },

    #[error("matrix exponential out of range: {0}")]
    Range(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn mismatch(what: &str, expected: impl ToString, found: impl ToString) -> Error {
    Error::DimensionMismatch {
        what: what.to_string(),
        expected: expected.to_string(),
        found: found.to_string(),
    }
}
