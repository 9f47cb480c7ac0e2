use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input violated a documented precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// A physical or numerical identity failed beyond tolerance.
    #[error("numerical consistency: {0}")]
    Consistency(String),

    /// The Fock cutoff leaves too much coherent-state mass above it.
    #[error("Fock cutoff n_max = {n_max} too small: tail mass {tail:.3e} above n_max - 5")]
    Truncation { n_max: usize, tail: f64 },

    #[error("config: {0}")]
    Config(String),

    #[error("config parse error at line {line}: {message}")]
    ConfigParse { line: usize, message: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn consistency(msg: impl Into<String>) -> Self {
        Error::Consistency(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the `simulate` binary.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::ConfigParse { .. } | Error::Domain(_) => 2,
            Error::Consistency(_) | Error::Truncation { .. } => 3,
            Error::Io { .. } => 4,
        }
    }
}
