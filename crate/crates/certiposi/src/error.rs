use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degree too small: need at least {needed}, got {got}")]
    DegreeTooSmall { needed: u32, got: u32 },

    #[error("simplex domains differ")]
    DomainMismatch,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("zero polynomial constraint at index {0}")]
    ZeroConstraint(usize),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("objective is not positive on S: {0}")]
    NotPositive(String),

    #[error("no feasible point found: {0}")]
    NoFeasiblePoint(String),

    #[error("constraint qualification violated: {0}")]
    CqcViolation(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
