use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Domain(mmqss::Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    /// 2 for usage errors, 3 for domain errors, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            Self::Domain(_) => 3,
            Self::Io(_) => 1,
        }
    }
}

impl From<mmqss::Error> for CliError {
    fn from(err: mmqss::Error) -> Self {
        match err {
            mmqss::Error::InvalidParameter { .. } | mmqss::Error::UnknownTag(_) => {
                Self::Usage(err.to_string())
            }
            other => Self::Domain(other),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
