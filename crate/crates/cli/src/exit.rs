use cmsoule::Error;

/// Process exit status: 0 success, 1 mathematical failure, 2 usage error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Failure = 1,
    Usage = 2,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failure(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn status(&self) -> ExitStatus {
        match self {
            CliError::Usage(_) => ExitStatus::Usage,
            CliError::Failure(_) | CliError::Io(_) => ExitStatus::Failure,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::UnsupportedField(_)
            | Error::NotAPrime(_)
            | Error::PrecisionTooLow(_)
            | Error::Precondition(_)
            | Error::InvalidIndex(_)
            | Error::Admissibility(_) => CliError::Usage(msg),
            _ => CliError::Failure(msg),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
