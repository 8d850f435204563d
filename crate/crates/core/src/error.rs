use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("coupling overflow at index {index}: log value {log_value}")]
    Overflow { index: usize, log_value: f64 },

    #[error("size error: {0}")]
    Size(String),

    #[error("parity error: {0}")]
    Parity(String),

    #[error("bisection for eigenvalue {index} did not converge: bracket [{lo:e}, {hi:e}] after {steps} steps")]
    Bisection {
        index: usize,
        lo: f64,
        hi: f64,
        steps: usize,
    },

    #[error(
        "inverse iteration did not converge: residual {residual:e} after {iterations} iterations"
    )]
    InverseIteration { residual: f64, iterations: usize },

    #[error("eigenvalue {lambda:e} is not isolated: {count} eigenvalues in the window")]
    Degenerate { lambda: f64, count: usize },

    #[error("vector norm {0} is not within 1e-9 of 1")]
    Norm(f64),

    #[error("rank deficient fit: {0}")]
    Rank(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("missing input {}", .0.display())]
    MissingInput(PathBuf),

    #[error("parse error in {file}: {message}")]
    Parse { file: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
