use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid value for {flag}: {message}")]
    Numeric { flag: &'static str, message: String },
    #[error("{0}")]
    Data(String),
    #[error(transparent)]
    Model(#[from] parity_sim::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn numeric(flag: &'static str, message: String) -> Self {
        CliError::Numeric { flag, message }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 usage, 3 numeric or domain, 4 I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric { .. } | CliError::Data(_) | CliError::Model(_) => 3,
            CliError::Io { .. } => 4,
        }
    }
}
