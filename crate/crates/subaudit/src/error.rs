use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{file}: missing required column `{column}`")]
    MissingColumn { file: String, column: String },
    #[error("{file}: row {row}: {message}")]
    Row { file: String, row: usize, message: String },
    #[error("{file}: {source}")]
    Csv { file: String, source: csv::Error },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: no files matching {pattern}", dir.display())]
    MissingFile { dir: PathBuf, pattern: String },
}

impl IngestError {
    pub(crate) fn csv(file: &str, source: csv::Error) -> Self {
        IngestError::Csv { file: file.into(), source }
    }
}

/// Top-level failure, grouped by process exit code.
#[derive(Debug, Error)]
pub enum AppError {
    /// Bad invocation (exit 1).
    #[error("{0}")]
    Usage(String),
    /// Input data or configuration rejected (exit 2).
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Model(#[from] subaudit_core::Error),
    #[error("{0}")]
    Data(String),
    /// Anything else, mostly output IO (exit 3).
    #[error("{0}")]
    Internal(String),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Usage(_) => 1,
            AppError::Ingest(_) | AppError::Model(_) | AppError::Data(_) => 2,
            AppError::Internal(_) => 3,
        }
    }

    pub(crate) fn io(path: &std::path::Path, e: impl std::fmt::Display) -> Self {
        AppError::Internal(format!("{}: {e}", path.display()))
    }
}
