//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Validation and construction failures.
///
/// Variants carry the measured violation so callers can report how far an
/// input was from satisfying the contract.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not hermitian: max |M - M†| = {violation:.3e} exceeds {tolerance:.3e}")]
    NotHermitian { violation: f64, tolerance: f64 },

    #[error(
        "matrix is not complex symmetric: max |M - Mᵀ| = {violation:.3e} exceeds {tolerance:.3e}"
    )]
    NotSymmetric { violation: f64, tolerance: f64 },

    #[error("matrix is not left-unitary: max |V†V - 1| = {violation:.3e} exceeds {tolerance:.3e}")]
    NotLeftUnitary { violation: f64, tolerance: f64 },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        actual: String,
    },

    #[error("trace deviates from one by {violation:.3e} (tolerance {tolerance:.3e})")]
    TraceNotOne { violation: f64, tolerance: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:.3e} below {floor:.3e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64, floor: f64 },

    #[error("state vector norm deviates from one by {violation:.3e} (tolerance {tolerance:.3e})")]
    NotNormalized { violation: f64, tolerance: f64 },

    #[error("parameter {name} = {value} outside [{min}, {max}]")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    pub(crate) fn dimension(
        context: &'static str,
        expected: impl ToString,
        actual: impl ToString,
    ) -> Self {
        Error::DimensionMismatch {
            context,
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }
}
