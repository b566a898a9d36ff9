use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A row or header could not be read. `line` is 1-based.
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("invalid log: {0}")]
    Validation(String),

    #[error("invalid binding for {template}: {message}")]
    Binding {
        template: &'static str,
        message: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid SQL identifier {0:?}")]
    Identifier(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn parse(line: u64, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
