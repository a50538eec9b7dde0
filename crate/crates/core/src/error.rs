use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse grouping of failures, used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Data,
    Numeric,
    Interrupted,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed row at line {line}: {reason}")]
    MalformedRow { line: u64, reason: String },

    #[error("non-positive price at line {line}")]
    NonPositivePrice { line: u64 },

    #[error("dates not strictly increasing at line {line}")]
    NonMonotoneDates { line: u64 },

    #[error("missing column `{0}` in header")]
    MissingColumn(String),

    #[error("series too short: need at least {needed} points, got {got}")]
    SeriesTooShort { needed: usize, got: usize },

    #[error("series is degenerate (all values zero)")]
    DegenerateSeries,

    #[error("series contains non-finite values")]
    NonFinite,

    #[error("box size {scale} exceeds series length {len}")]
    ScaleTooLarge { scale: usize, len: usize },

    #[error("box size {scale} outside admissible range [{min}, {max}]")]
    ScaleOutOfRange { scale: usize, min: usize, max: usize },

    #[error("segment of length {len} cannot be fitted with a degree-{order} polynomial")]
    Underdetermined { len: usize, order: usize },

    #[error("every box is degenerate at q = {q}, s = {scale}")]
    AllBoxesDegenerate { q: f64, scale: usize },

    #[error("fewer than 3 usable scales for q = {q}")]
    InsufficientScales { q: f64 },

    #[error("order grid needs at least {needed} points, got {got}")]
    GridTooSmall { needed: usize, got: usize },

    #[error("order grids differ between spectra")]
    GridMismatch,

    #[error("regression design matrix is rank deficient")]
    RankDeficient,

    #[error("series is constant")]
    ConstantSeries,

    #[error("series length {got} below minimum {min}")]
    LengthTooShort { got: usize, min: usize },

    #[error("circulant embedding has negative eigenvalues up to size {size}")]
    EmbeddingFailure { size: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("serialization error: {0}")]
    Serialization(String),

    #[error("run cancelled")]
    Cancelled,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidConfig(_) | Error::GridTooSmall { .. } | Error::ScaleOutOfRange { .. } => {
                ErrorKind::Config
            }
            Error::FileNotFound(_)
            | Error::Io(_)
            | Error::MalformedRow { .. }
            | Error::NonPositivePrice { .. }
            | Error::NonMonotoneDates { .. }
            | Error::MissingColumn(_)
            | Error::SeriesTooShort { .. }
            | Error::DegenerateSeries
            | Error::NonFinite
            | Error::ConstantSeries
            | Error::LengthTooShort { .. }
            | Error::ScaleTooLarge { .. }
            | Error::GridMismatch
            | Error::Serialization(_) => ErrorKind::Data,
            Error::Underdetermined { .. }
            | Error::AllBoxesDegenerate { .. }
            | Error::InsufficientScales { .. }
            | Error::RankDeficient
            | Error::EmbeddingFailure { .. } => ErrorKind::Numeric,
            Error::Cancelled => ErrorKind::Interrupted,
        }
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        let line = e.position().map(|p| p.line()).unwrap_or(0);
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io),
            other => Error::MalformedRow {
                line,
                reason: format!("{other:?}"),
            },
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}
