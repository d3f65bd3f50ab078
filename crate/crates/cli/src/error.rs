use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config keys or distribution specs.
    #[error("{0}")]
    Usage(String),
    /// An internal cross-check did not hold. Artifacts are still written.
    #[error("check failed: {0}")]
    Check(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Run(grprep_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Check(_) | CliError::Run(_) => 1,
            CliError::Io(_) => 3,
        }
    }
}

impl From<grprep_core::Error> for CliError {
    fn from(e: grprep_core::Error) -> Self {
        use grprep_core::Error;
        match e {
            Error::Integration { .. } | Error::AtRegion { .. } => CliError::Run(e),
            other => CliError::Usage(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
