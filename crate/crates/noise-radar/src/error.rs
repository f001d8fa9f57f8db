//! Crate-wide error type.

use std::path::PathBuf;

/// Errors produced by the library and the CLI front end.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument violates a documented domain constraint.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Input is numerically degenerate (zero power, singular model, ...).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A matrix expected to be symmetric was not, beyond tolerance.
    #[error("matrix not symmetric within tolerance: {0}")]
    Asymmetric(String),

    /// Cholesky factorization failed; the target matrix is not positive definite.
    #[error("covariance matrix is not positive definite ({0})")]
    NotPositiveDefinite(String),

    /// A Monte Carlo trial failed; carries the trial index for diagnosis.
    #[error("{hypothesis} trial {index} failed: {source}")]
    Trial {
        hypothesis: &'static str,
        index: usize,
        #[source]
        source: Box<Error>,
    },

    /// Bad configuration file contents (schema or value errors).
    #[error("config error{}: {message}", path.as_ref().map(|p| format!(" in {}", p.display())).unwrap_or_default())]
    Config {
        path: Option<PathBuf>,
        message: String,
    },

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn config(message: impl Into<String>) -> Self {
        Error::Config {
            path: None,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
