use std::path::PathBuf;

use projgeom::io::ParseError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error(transparent)]
    Domain(#[from] projgeom::Error),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    /// `2` for usage and I/O problems, `1` for everything the mathematics rejects.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Parse { .. } => 2,
            CliError::Domain(_) | CliError::Failed(_) => 1,
        }
    }
}
