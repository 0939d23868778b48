//! Error type shared by every module.

use thiserror::Error;

/// Failure modes of the transform library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LagError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// `eta * t` exceeds the split-recurrence guard and doubling was not allowed.
    #[error("argument eta*t = {argument} exceeds the evaluation guard {guard}; enable shift doubling")]
    GuardExceeded { argument: f64, guard: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("empty spectrum")]
    EmptySpectrum,
    #[error("reference signal has zero energy")]
    DivisionByZero,
    #[error("transform matrix of {entries} entries exceeds the allocation guard of {limit}")]
    AllocationGuard { entries: usize, limit: usize },
}

pub type Result<T> = std::result::Result<T, LagError>;

pub(crate) fn invalid(msg: impl Into<String>) -> LagError {
    LagError::InvalidArgument(msg.into())
}

pub(crate) fn mismatch(msg: impl Into<String>) -> LagError {
    LagError::DimensionMismatch(msg.into())
}
