use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid partition {0:?}: parts must be positive and weakly decreasing")]
    InvalidPartition(Vec<u32>),
    #[error("size mismatch: |alpha| = {left}, |beta| = {right}")]
    SizeMismatch { left: u32, right: u32 },
    #[error("partition {partition:?} has {rows} rows, more than N = {n}")]
    TooManyRows { partition: Vec<u32>, rows: usize, n: u32 },
    #[error("{what} exceeds guard: {value} > {limit}{hint}")]
    Guard {
        what: &'static str,
        value: usize,
        limit: usize,
        hint: &'static str,
    },
    #[error("series constant term must be {expected} for {op}")]
    ConstantTerm { op: &'static str, expected: &'static str },
    #[error("series variant or truncation mismatch")]
    VariantMismatch,
    #[error("eigenvalue list length {got} does not match N = {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("eigenvalue {index} has modulus greater than one")]
    Modulus { index: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
