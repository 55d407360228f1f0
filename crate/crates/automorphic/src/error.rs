use std::path::PathBuf;

use crate::numerics::{Complex, QuadratureResult};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("pole of {function} at {at}")]
    Pole { function: &'static str, at: Complex },

    #[error("pole of factor {factor} at argument {at}")]
    FactorPole { factor: String, at: Complex },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge: estimate {} with error {:e} after {} evaluations",
        .0.value, .0.abs_error_estimate, .0.evaluations)]
    Quadrature(QuadratureResult),

    #[error("{what} did not converge (last estimate {estimate})")]
    NonConvergence { what: &'static str, estimate: Complex },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("truncation insufficient: {0}")]
    Truncation(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error on {path}: {message}")]
    Io { path: PathBuf, message: String },

    #[error("cache entry not found: {0}")]
    CacheNotFound(PathBuf),

    #[error("cache version mismatch in {path}: found {found}, expected {expected}")]
    CacheVersion {
        path: PathBuf,
        found: String,
        expected: u32,
    },

    #[error("cache checksum mismatch in {0}")]
    CacheChecksum(PathBuf),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, err: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            message: err.to_string(),
        }
    }
}
