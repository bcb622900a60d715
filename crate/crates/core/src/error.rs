use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by graph ingestion, the randomizers and the run pipeline.
#[derive(Debug, Error)]
#[non_exhaustive]
pub enum Error {
    /// A caller-supplied argument is outside the accepted domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The requested privacy budget cannot be split under strict accounting.
    #[error("infeasible budget: epsilon {epsilon} does not exceed the degree-noise floor {floor}")]
    InfeasibleBudget { epsilon: f64, floor: f64 },

    /// An input file is missing or structurally malformed.
    #[error("format error in {}: {message}", path.display())]
    Format { path: PathBuf, message: String },

    /// A line of an input file could not be interpreted.
    #[error("parse error in {}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    /// Writing a noisy collection back to disk failed a consistency check.
    #[error("export error: {0}")]
    Export(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for errors caused by bad arguments rather than bad data.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::InvalidArgument(_) | Error::InfeasibleBudget { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
