use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("negative entry at ({row}, {col}) where a nonnegative matrix is required")]
    NegativeEntry { row: usize, col: usize },

    #[error("matrix of dimension {n} exceeds the limit of {limit} for this operation")]
    DimensionGuard { n: usize, limit: usize },

    #[error("matrix is not a nonnegative idempotent")]
    NotIdempotent,

    #[error("ideal {members:?} is not invariant under the operator")]
    NotInvariant { members: Vec<usize> },

    #[error("functional does not pair to one with the vector (got {0})")]
    Pairing(String),

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A theorem-level consistency assertion failed. Indicates a bug, never bad input.
    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    /// A constructed witness or decomposition failed its own exact verification.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::TheoremViolation(_) | Error::Internal(_))
    }
}
