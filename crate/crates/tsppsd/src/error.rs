use thiserror::Error;

/// Exit status for success.
pub const EXIT_OK: i32 = 0;
/// A verification failed or a functional was rejected.
pub const EXIT_FAILURE: i32 = 1;
/// Bad flags, arguments or input files.
pub const EXIT_USAGE: i32 = 2;
/// A resource cap was hit.
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Spec(String),
    #[error(transparent)]
    Core(#[from] tsppsd_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(tsppsd_core::Error::ResourceLimit { .. }) => EXIT_RESOURCE,
            _ => EXIT_USAGE,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
