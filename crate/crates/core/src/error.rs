use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("window [{lo}, {hi}] is outside the table range [1, {len}]")]
    WindowOutOfRange { lo: i64, hi: i64, len: usize },

    #[error("table `{name}` has length {len}, need at least {needed}")]
    TableTooShort { name: String, len: usize, needed: usize },

    #[error("{source_name}:{line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("{0}")]
    EmptyInput(String),

    #[error("{what} ({count}) exceeds the configured budget of {budget}")]
    BudgetExceeded {
        what: &'static str,
        count: u64,
        budget: u64,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn parse(source_name: &str, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            source_name: source_name.to_string(),
            line,
            message: message.into(),
        }
    }
}
