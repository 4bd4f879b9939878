//! Error type shared across the crate.

use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An orbit left the guarded region, which means the map parameters are
    /// outside the chaotic regime (or the initial condition left the basin).
    #[error("{map} orbit diverged at step {step}: |x| = {value:.3e} exceeds {limit:.0e}")]
    Divergence {
        map: String,
        step: usize,
        value: f64,
        limit: f64,
    },

    #[error("expected {expected} samples, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("sample {value} is outside the quantizer range (-1, 1)")]
    OutOfRange { value: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
