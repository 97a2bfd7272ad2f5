use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("digit {digit} out of range for radix {radix}")]
    DigitOutOfRange { digit: u32, radix: u8 },

    #[error("radix mismatch: {left} vs {right}")]
    RadixMismatch { left: u8, right: u8 },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("even value {value} at position {index}")]
    EvenEntry { index: usize, value: i64 },

    #[error("round {round}: minimizer emitted even entry {value}")]
    EvenMove { round: usize, value: i64 },

    #[error("{what} exceeds limit {limit}")]
    LimitExceeded { what: String, limit: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty set system")]
    EmptySystem,

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
