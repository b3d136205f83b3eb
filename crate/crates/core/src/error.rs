use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by series construction, checks, and the suite harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("coefficient {index} is not finite ({re}, {im})")]
    NonFinite { index: usize, re: f64, im: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("sampling plan contains no points")]
    EmptyGrid,

    #[error("schema error: {0}")]
    Schema(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
