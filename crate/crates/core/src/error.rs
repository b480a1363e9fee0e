use thiserror::Error;

/// Errors raised by constructions, decoders and exhaustive checkers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch in {op}: left is {left_rows}x{left_cols}, right is {right_rows}x{right_cols}")]
    DimensionMismatch {
        op: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("vector length {got} does not match expected length {expected} in {op}")]
    LengthMismatch {
        op: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("index ({row}, {col}) out of range for a {rows}x{cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("duplicate entry ({row}, {col})")]
    DuplicateEntry { row: usize, col: usize },

    #[error("inconsistent block shapes: {0}")]
    BlockShape(String),

    #[error("index space overflow in {0}")]
    Overflow(&'static str),

    #[error("search budget exceeded: {required} combinations required, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("syndrome is not in the image of the check matrix")]
    SyndromeNotInImage,

    #[error("no repair within the decoder radius t = {t}")]
    NoRepairWithinRadius { t: usize },

    #[error("configuration-model sampling failed for seed {seed} after {budget} attempts")]
    SamplingExhausted { seed: u64, budget: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("construction check failed: {0}")]
    Construction(String),

    #[error("chain maps do not compose to zero at position {0}")]
    NotAChain(usize),

    #[error("residual is not in the kernel of the check matrix")]
    ResidualNotInKernel,

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
