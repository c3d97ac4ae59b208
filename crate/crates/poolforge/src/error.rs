use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

/// Failures of the file layer and CLI, split by exit code: input and usage
/// problems exit 2, everything else 1.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: io::Error },

    #[error("{path}: {source}")]
    Write { path: PathBuf, source: io::Error },

    #[error("{source_name}:{line}: {message}")]
    Parse {
        source_name: String,
        line: u64,
        message: String,
    },

    #[error("{0}")]
    Invalid(#[from] poolforge_core::Error),

    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Runtime(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Read { .. } | Error::Parse { .. } | Error::Invalid(_) | Error::Usage(_) => 2,
            Error::Write { .. } | Error::Runtime(_) => 1,
        }
    }

    pub fn read(path: &Path, source: io::Error) -> Self {
        Error::Read {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn write(path: &Path, source: io::Error) -> Self {
        Error::Write {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn parse(source_name: impl Into<String>, line: u64, message: impl Into<String>) -> Self {
        Error::Parse {
            source_name: source_name.into(),
            line,
            message: message.into(),
        }
    }
}
