//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("base mismatch: {left} vs {right}")]
    BaseMismatch { left: u32, right: u32 },

    #[error("invalid base {0}: must be at least 2")]
    InvalidBase(u32),

    #[error("digit {digit} out of range for base {base}")]
    InvalidDigit { digit: u32, base: u32 },

    #[error("residue {residue} out of range: must satisfy 0 <= r < {base}^{level}")]
    ResidueOutOfRange { residue: u64, base: u32, level: u32 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("polynomial is not monic")]
    NotMonic,

    #[error("cyclotomic index {0} does not divide the characteristic polynomial")]
    NotACyclotomicFactor(u32),

    #[error("unknown builtin sequence `{0}`")]
    UnknownBuiltin(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{path}: i/o error: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: byte offset {offset}: {message}")]
    JsonSyntax {
        path: String,
        offset: usize,
        message: String,
    },

    #[error("{path}: invalid contents: {message}")]
    InvalidFile { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
