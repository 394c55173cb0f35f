//! Error types shared across the crate.

use crate::basis::Statistics;

/// Errors produced by basis construction, matrix operations and the
/// closed-form evaluators.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument violated a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A level index referenced a rung outside the spectrum.
    #[error("level index {level} out of range for spectrum with {levels} levels")]
    LevelOutOfRange { level: usize, levels: usize },

    /// Two objects built over different bases were combined.
    #[error("basis mismatch: {expected:?} with {levels_expected} levels vs {found:?} with {levels_found} levels")]
    BasisMismatch {
        expected: Statistics,
        levels_expected: usize,
        found: Statistics,
        levels_found: usize,
    },

    /// A matrix that must be unitary failed the unitarity check.
    #[error("matrix is not unitary: max |S\u{2020}S - I| = {residual:.3e}")]
    NotUnitary { residual: f64 },

    /// A matrix that must be Hermitian with unit trace failed validation.
    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),

    /// An eigenvalue fell below the numerical positive-semidefinite floor.
    #[error("numerical PSD violation: eigenvalue {eigenvalue:.3e} below -1e-8")]
    PsdViolation { eigenvalue: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
