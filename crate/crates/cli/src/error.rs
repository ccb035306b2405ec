use std::path::{Path, PathBuf};

use hypzero::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),

    #[error("config: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Missing { path: PathBuf, source: std::io::Error },

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn io(source: std::io::Error, path: &Path) -> Self {
        let path = path.to_path_buf();
        if source.kind() == std::io::ErrorKind::NotFound {
            CliError::Missing { path, source }
        } else {
            CliError::Io { path, source }
        }
    }

    /// 2 bad input, 3 numerical failure, 4 missing or unreadable file.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Missing { .. } | CliError::Io { .. } => 4,
            CliError::Core(e) => match e {
                Error::NonConvergence { .. }
                | Error::Uncertified { .. }
                | Error::BranchCollision { .. }
                | Error::Trace(_)
                | Error::Pole { .. }
                | Error::NonReduced => 3,
                _ => 2,
            },
        }
    }
}
