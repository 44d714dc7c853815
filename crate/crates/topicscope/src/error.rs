use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub type Result<T, E = AppError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum AppError {
    #[error(transparent)]
    Core(#[from] topicscope_core::Error),

    /// A pipeline stage ran before the stage that produces its input.
    #[error("missing {what}: run `{stage}` first")]
    MissingStage { what: &'static str, stage: &'static str },

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },

    #[error("transport error: {0}")]
    Transport(String),

    #[error("store {0} is locked by another command")]
    Locked(PathBuf),

    #[error("{0}")]
    Usage(String),
}

impl AppError {
    pub fn io(path: impl AsRef<Path>, source: io::Error) -> Self {
        AppError::Io {
            path: path.as_ref().to_path_buf(),
            source,
        }
    }

    /// Process exit status: 1 for bad input or configuration, 2 for the
    /// environment (files, network, locks).
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Core(_) | AppError::MissingStage { .. } | AppError::Usage(_) => 1,
            AppError::Io { .. } | AppError::Transport(_) | AppError::Locked(_) => 2,
        }
    }
}
