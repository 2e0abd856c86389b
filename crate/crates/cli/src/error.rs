use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid config key `{key}`: {message}")]
    Validation { key: String, message: String },
    #[error("snapshot format error: {0}")]
    Format(String),
    #[error("snapshot is truncated or corrupt: {0}")]
    Corrupt(String),
    #[error("csv schema error: {0}")]
    Schema(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] msdd_core::Error),
}

impl CliError {
    pub fn invalid(key: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Validation {
            key: key.into(),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 3 for a diverged run, 2 for every input or setup problem.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(msdd_core::Error::Divergence { .. }) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
