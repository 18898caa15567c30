use thiserror::Error;

use crate::perm::Occurrence;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not a permutation: {0}")]
    InvalidPermutation(String),

    #[error("sequence contains duplicate entry {0}")]
    DuplicateEntry(usize),

    #[error("occurrence has {got} indices but the pattern has {expected} elements")]
    LengthMismatch { expected: usize, got: usize },

    #[error("index {index} out of range for text of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("permutation is not in {class}; witness {pattern} at {witness}")]
    NotInClass {
        class: &'static str,
        pattern: String,
        witness: Occurrence,
    },

    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("invalid vertex order: {0}")]
    InvalidOrder(String),

    #[error("{what} must be at least {min}, got {got}")]
    TooSmall {
        what: &'static str,
        min: usize,
        got: usize,
    },

    #[error("{what} exceeds the limit {max} (got {got})")]
    TooLarge {
        what: &'static str,
        max: usize,
        got: usize,
    },

    #[error("empty permutation is not allowed here")]
    EmptyPermutation,

    #[error("DIMACS line {line}: {message}")]
    Dimacs { line: usize, message: String },

    #[error("invalid formula: {0}")]
    InvalidFormula(String),

    #[error("occurrence is not base-aligned: {0}")]
    NotBaseAligned(String),

    #[error("occurrence is not valid for this pattern and text")]
    NotAnOccurrence,

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
