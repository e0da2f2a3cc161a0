use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("state count {0} is outside the supported range 1..=16")]
    StateCount(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("alphabet size {size} exceeds the cap of {cap}")]
    AlphabetCap { size: u128, cap: usize },

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error("catalog entry {name} failed self-verification: {reason}")]
    Catalog { name: String, reason: String },

    #[error("constructed word failed verification: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}
