use alloc::string::String;

/// Errors raised by the core routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix dimensions {rows}x{cols} are invalid")]
    BadShape { rows: usize, cols: usize },
    #[error("expected {expected} entries, got {actual}")]
    EntryCount { expected: usize, actual: usize },
    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("mode index {index} out of range 1..={n}")]
    ModeOutOfRange { index: usize, n: usize },
    #[error("rotation modes must satisfy i < j, got ({i}, {j})")]
    BadRotationModes { i: usize, j: usize },
    #[error("{what} is limited to n <= {max}, got {n}")]
    TooLarge { what: &'static str, n: usize, max: usize },
    #[error("{0} must be at least 1")]
    Empty(&'static str),
    #[error("partition of {partition} does not match matrix size {n}")]
    DegreeMismatch { partition: usize, n: usize },
    #[error("invalid partition: {0}")]
    BadPartition(String),
    #[error("matrix is not Hessenberg within tolerance {tol:e}")]
    NotHessenberg { tol: f64 },
    #[error("invalid delays: {0}")]
    BadDelays(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("netlist does not reproduce the factorized matrix (defect {defect:e})")]
    NetlistMismatch { defect: f64 },
    #[error("invalid sum specification: {0}")]
    BadSumSpec(String),
}

pub type Result<T> = core::result::Result<T, Error>;
