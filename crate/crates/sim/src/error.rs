use collapse_core::DomainError;
use thiserror::Error;

/// A failed command, mapped to the process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad configuration, arguments or files: exit 1.
    #[error("{0}")]
    Config(String),
    /// Invalid parameter value: exit 1.
    #[error(transparent)]
    Domain(#[from] DomainError),
    /// A numerical procedure failed: exit 2.
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        Self::Config(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Self::Numerical(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Domain(_) => 1,
            Self::Numerical(_) => 2,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Config(format!("i/o error: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::Config(format!("csv error: {e}"))
    }
}
