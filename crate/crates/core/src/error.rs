use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller passed arguments outside an operation's domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unknown cluster id {0}")]
    UnknownCluster(u64),

    /// Bookkeeping would leave a count negative.
    #[error("state corruption: {0}")]
    StateCorruption(String),

    /// Synthetic generation could not meet its targets.
    #[error("generation failed: {0}")]
    Generation(String),

    /// A data file is malformed. `line` is 1-based.
    #[error("data error at line {line}: {message}")]
    Data { line: usize, message: String },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn data(line: usize, msg: impl Into<String>) -> Self {
        Error::Data {
            line,
            message: msg.into(),
        }
    }

    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) => 1,
            Error::Numerical(_) => 3,
            _ => 2,
        }
    }
}
