use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field size {size} exceeds cap {cap}")]
    CapExceeded { size: u128, cap: u64 },
    #[error("field has only {available} multiplicative generators, rank {rank} requested")]
    NoSuchGenerator { rank: usize, available: usize },
    #[error("zero has no {0}")]
    ZeroInput(&'static str),
    #[error("division by zero")]
    DivisionByZero,
    #[error("characters of different groups: order {0} vs {1}")]
    FieldMismatch(u32, u32),
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("theorem hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("partition part {part} exceeds the characteristic {p}")]
    PartTooLarge { part: usize, p: u32 },
    #[error("general position violated: {0}")]
    GeneralPosition(String),
    #[error("enumeration of {size} points exceeds budget {budget}")]
    Budget { size: u128, budget: u128 },
    #[error("unsupported shape: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
