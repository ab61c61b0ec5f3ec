use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot access {}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {row}, column {column}: {message}")]
    Parse { row: usize, column: usize, message: String },

    #[error("empty input: {0}")]
    Empty(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown strategy {name:?}; valid strategies: {}", valid.join(", "))]
    UnknownStrategy { name: String, valid: Vec<String> },

    #[error("invalid budget {budget} for pool of {pool} points")]
    InvalidBudget { budget: usize, pool: usize },

    #[error("index {index} out of range for pool of {pool} points")]
    IndexOutOfRange { index: usize, pool: usize },

    #[error("constant column {0}: cannot normalize")]
    ConstantColumn(usize),

    #[error("kernel matrix is ill-conditioned at lambda = {lambda:e} (smallest eigenvalue estimate {lambda_min:e})")]
    IllConditioned { lambda: f64, lambda_min: f64 },

    #[error("matrix is not symmetric: entry ({row}, {col}) differs by {diff:e}")]
    NotSymmetric { row: usize, col: usize, diff: f64 },

    #[error("instance too large for exhaustive search: {0} subsets")]
    TooLarge(u128),

    #[error("labels required but dataset has none")]
    MissingLabels,

    #[error("Lipschitz assumption violated: rows {0} and {1} coincide but labels differ")]
    InfiniteSlope(usize, usize),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
