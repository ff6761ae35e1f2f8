//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by construction, evolution, measurement, and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not unitary: max-norm of U\u{2020}U - I is {deviation:.3e} (tolerance {tolerance:.1e})")]
    NotUnitary { deviation: f64, tolerance: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("non-finite value encountered in {context}")]
    NonFinite { context: &'static str },

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("position label {label} outside topology range")]
    PositionOutOfRange { label: i64 },

    #[error("coin index {coin} outside [0, {coin_dim})")]
    CoinOutOfRange { coin: usize, coin_dim: usize },

    #[error("state has zero norm and cannot be normalized")]
    ZeroNorm,

    #[error("state norm deviates from 1 by {deviation:.3e} (tolerance {tolerance:.1e})")]
    NotNormalized { deviation: f64, tolerance: f64 },

    #[error("distribution sums to {sum} which is outside tolerance {tolerance:.1e} of 1")]
    NotADistribution { sum: f64, tolerance: f64 },

    #[error("negative probability {value:.3e} at index {index}")]
    NegativeProbability { index: usize, value: f64 },

    #[error("grid too small: {needed} modes do not fit {available} bins")]
    GridTooSmall { needed: usize, available: usize },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("sampling is undefined for the ideal measurement model")]
    SamplingUndefined,

    #[error("empty input: {context}")]
    EmptyInput { context: &'static str },

    #[error("configuration error at `{path}`: {reason}")]
    Config { path: String, reason: String },

    #[error("files disagree on row indices: {detail}")]
    IndexMismatch { detail: String },

    #[error("malformed file {path}: {reason}")]
    Parse { path: String, reason: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn invalid<S: Into<String>>(name: &'static str, reason: S) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub fn config<P: Into<String>, S: Into<String>>(path: P, reason: S) -> Self {
        Error::Config {
            path: path.into(),
            reason: reason.into(),
        }
    }

    pub fn io<P: AsRef<std::path::Path>>(path: P, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    /// True for errors caused by the filesystem rather than by inputs.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
