use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] hanoiflow_core::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid disc range `{0}`: expected `n` or `a..b` with 1 <= a <= b")]
    Range(String),
    #[error(
        "exact oracles refused for H_{p}^{n}: {vertices} vertices exceeds the budget of {budget}; \
         run `hanoiflow flow --p {p} --n {n}` for the bounds-only report"
    )]
    ExactBudget { p: usize, n: usize, vertices: usize, budget: usize },
    #[error("{0}")]
    Refused(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
