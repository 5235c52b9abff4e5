//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by space construction, kernel evaluation, solves, and
/// experiment drivers.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A size guard was exceeded (point count, recursion level, ...).
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// A text input (point cloud, matrix table, spec string) failed to parse.
    /// `line` is 1-based; 0 means the error is not tied to a line.
    #[error("parse error (line {line}): {message}")]
    Parse { line: usize, message: String },

    /// A kernel was evaluated on the diagonal. Kernels here are defined
    /// off-diagonal only; quadrature drops the diagonal term.
    #[error("kernel evaluated on the diagonal at index {0}")]
    DiagonalAccess(usize),

    /// Two objects built over different samplings were combined.
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    /// Kernel assembly met a non-finite value off the diagonal.
    #[error("non-finite kernel value at pair ({i}, {j})")]
    NonFiniteKernel { i: usize, j: usize },

    /// A linear solve failed or missed its residual contract.
    #[error("solve failed: {0}")]
    Solve(String),

    /// A measured hypothesis required by a theorem-shaped experiment failed.
    #[error("hypothesis check failed: {0}")]
    Hypothesis(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Shorthand for `Error::InvalidArgument` with formatted text.
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
