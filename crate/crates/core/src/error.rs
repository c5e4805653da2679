use thiserror::Error;

/// Errors produced by the modeling and calibration layers.
#[derive(Debug, Error)]
pub enum Error {
    /// An input violated a numeric precondition (non-positive, out of range).
    #[error("domain error: {0}")]
    Domain(String),

    /// A required optional parameter was missing or a config was inconsistent.
    #[error("configuration error: {0}")]
    Config(String),

    /// A requested row, cell, or model entry does not exist.
    #[error("lookup error: {0}")]
    Lookup(String),

    /// The embedded or user-supplied dataset failed an integrity check.
    #[error("dataset integrity error: {0}")]
    Dataset(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(#[from] toml::de::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn lookup(msg: impl Into<String>) -> Self {
        Error::Lookup(msg.into())
    }

    pub fn dataset(msg: impl Into<String>) -> Self {
        Error::Dataset(msg.into())
    }
}
