//! Crate-wide error type.

use alloc::string::String;

/// Failure modes shared by every module.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Operand shapes do not fit together.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// A matrix that must be unitary is not, within tolerance.
    #[error("matrix is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },
    /// A structural invariant (completeness, trace preservation, ...) fails.
    #[error("invariant violated: {0}")]
    Invariant(String),
    /// An ensemble is not certified as a design of the order an argument needs.
    #[error("a unitary design of order {required} is required (ensemble claims {claimed:?})")]
    DesignOrder { required: usize, claimed: Option<usize> },
    /// The requested instance exceeds the dense-materialization budget.
    #[error("dimension {dim} exceeds the limit {limit}")]
    TooLarge { dim: usize, limit: usize },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn dimension(msg: impl Into<String>) -> Error {
    Error::Dimension(msg.into())
}
