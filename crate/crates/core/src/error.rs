use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("site index {index} out of range for a layout of {len} sites")]
    SiteOutOfRange { index: usize, len: usize },

    #[error("operator dimension {op} does not match site dimension {site}")]
    DimensionMismatch { op: usize, site: usize },

    #[error("invalid site pair ({0}, {1})")]
    InvalidPair(usize, usize),

    #[error("temperature must be positive and finite, got {0}")]
    InvalidTemperature(f64),

    #[error("eigensolver did not converge for a block of dimension {0}")]
    NoConvergence(usize),

    #[error("state is not positive semidefinite (minimum eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("numerical inconsistency: {0}")]
    Numerical(String),

    #[error("invalid value for `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("at {point}: {source}")]
    AtGridPoint {
        point: String,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            reason: reason.into(),
        }
    }

    /// Process exit status for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 3,
            Error::NoConvergence(_) | Error::NotPositive(_) | Error::Numerical(_) => 2,
            Error::AtGridPoint { source, .. } => source.exit_code(),
            _ => 1,
        }
    }
}
