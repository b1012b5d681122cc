use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors reported by the decoder toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid configuration (unsupported ring, bad parameter value, ...).
    #[error("configuration error: {0}")]
    Config(String),
    /// Malformed input text (matrix, LLR, or codeword files).
    #[error("parse error: {0}")]
    Parse(String),
    /// Mismatched vector/matrix dimensions.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// A brute-force oracle was asked to enumerate more than its guard allows.
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub fn dimension(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }
}
