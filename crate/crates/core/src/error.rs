use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed header: {0}")]
    MalformedHeader(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    /// `frame` is 1-based.
    #[error("truncated frame data at frame {frame}")]
    TruncatedFrame { frame: usize },

    #[error("raw input requires dimensions (--width/--height)")]
    MissingDimensions,

    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),

    #[error("patch {patch_w}x{patch_h} does not fit in a {width}x{height} frame")]
    PatchTooLarge {
        patch_w: usize,
        patch_h: usize,
        width: usize,
        height: usize,
    },

    #[error("patch index ({row}, {col}) outside {rows}x{cols} grid")]
    PatchOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("non-finite value in input block")]
    NonFinite,

    #[error("DC coefficient is {0}, expected a masked block")]
    UnmaskedBlock(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("empty score list")]
    EmptyScores,

    #[error("invalid fraction {0}, expected 0 < r <= 1")]
    InvalidFraction(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("inconsistent temporal scores: {0}")]
    InconsistentScores(String),

    #[error("temporal heatmap requested for frame 1")]
    NoTemporalScores,

    #[error("unrecognized manifest version: {0:?}")]
    ManifestVersion(String),

    #[error("manifest line {line}: {msg}")]
    ManifestParse { line: usize, msg: String },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
