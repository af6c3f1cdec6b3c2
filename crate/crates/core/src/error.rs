//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A matrix or index had the wrong shape for the requested operation.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// An input violated a numerical precondition (non-Hermitian operator,
    /// invalid density matrix, out-of-domain parameter, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Two routes that must agree on the same physical question disagreed.
    /// This error firing on any valid input is a bug, not a user error.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
