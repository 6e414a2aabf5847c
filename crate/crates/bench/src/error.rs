use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("config error: {0}")]
    Config(String),

    #[error("cannot read `{path}`: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot write `{path}`: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("problem setup failed: {0}")]
    Problem(#[source] lradi_core::Error),

    #[error("solver error ({strategy}): {message}")]
    Solver { strategy: String, message: String },
}

impl BenchError {
    /// Process exit code: 1 for configuration and I/O problems, 2 for
    /// solver failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Solver { .. } => 2,
            _ => 1,
        }
    }
}
