use std::path::PathBuf;

use thiserror::Error;

use crate::model::TrainReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// An iterative routine hit its iteration cap; `last` is the final iterate.
    #[error("numeric failure: {message} (last iterate {last})")]
    Numeric { message: String, last: f64 },

    /// Training produced a non-finite loss. The report covers every epoch up
    /// to and including the one that diverged.
    #[error("training diverged at epoch {epoch}")]
    Diverged { epoch: usize, report: Box<TrainReport> },

    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit status: 3 for numeric failures, 2 for everything else
    /// (bad input, configuration, files).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numeric { .. } | Error::Diverged { .. } => 3,
            _ => 2,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
