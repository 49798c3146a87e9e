//! Error type shared across the pipeline.

use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, LexError>;

#[derive(Debug, thiserror::Error)]
pub enum LexError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("lookup error: {0}")]
    Lookup(String),

    #[error("training error: {0}")]
    Train(String),

    #[error("parameter error: {0}")]
    Param(String),
}

impl LexError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LexError::Io {
            path: path.into(),
            source,
        }
    }

    /// Exit code for the CLI: 2 for i/o failures, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            LexError::Io { .. } => 2,
            _ => 1,
        }
    }
}
