use thiserror::Error;

/// Command-line failures, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// `--help` or `--version` output; not a failure.
    #[error("{0}")]
    Info(String),
    #[error("{0}")]
    Usage(String),
    #[error("invalid value: {0}")]
    Invalid(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Info(_) => 0,
            CliError::Usage(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<uavcov::ModelError> for CliError {
    fn from(e: uavcov::ModelError) -> Self {
        CliError::Invalid(e.to_string())
    }
}
