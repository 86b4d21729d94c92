//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Structurally invalid input (mismatched bin schemes, tied scores, ...).
    #[error("invalid input: {0}")]
    Input(String),

    /// Data too degenerate for the requested statistic.
    #[error("degenerate data: {0}")]
    Degenerate(String),

    /// An iterative routine exhausted its iteration budget.
    #[error("no convergence after {iterations} iterations: {detail}")]
    NoConvergence { iterations: usize, detail: String },

    /// A game log rejected because too many rows failed validation.
    #[error("game log rejected: {} of {total_rows} data rows invalid", errors.len())]
    MalformedLog {
        total_rows: usize,
        errors: Vec<RowError>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One malformed game-log row, with its 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for RowError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}
