use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum SdsError {
    #[error("infeasible parameters: lambda*(v-1) = {lhs} but sum of k_i(k_i-1) = {rhs}")]
    InfeasibleParams { lhs: i64, rhs: i64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("value {value} is out of range for modulus {v}")]
    OutOfRange { value: i64, v: usize },

    #[error("duplicate element {value} in subset of Z_{v}")]
    DuplicateElement { value: usize, v: usize },

    #[error("sequence must have length at least 1")]
    EmptySequence,

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("inverse constant conversion is not integral: {numerator} is not divisible by {v}")]
    InverseNotIntegral { numerator: i64, v: usize },

    #[error("block {block} has size {found}, expected {expected}")]
    BlockSizeMismatch {
        block: usize,
        expected: usize,
        found: usize,
    },

    #[error("expected {expected} blocks, found {found}")]
    BlockCountMismatch { expected: usize, found: usize },

    #[error("{d} does not divide {v}")]
    NotDivisible { v: usize, d: usize },

    #[error("unsupported compression factor {0}")]
    UnsupportedFactor(usize),

    #[error("value {value} is not in the {m}-compressed alphabet")]
    AlphabetMismatch { value: i32, m: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("search space too large: {size} exceeds the guard of {limit}")]
    TooLarge { size: u128, limit: u128 },

    #[error("corrupt witness registry: {0}")]
    CorruptRegistry(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, SdsError>;
