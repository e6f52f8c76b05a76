use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty geometry set")]
    EmptyGeometry,

    #[error("invalid bounding box ({x1}, {y1}, {x2}, {y2})")]
    InvalidBox { x1: f64, y1: f64, x2: f64, y2: f64 },

    #[error("invalid cost: {0}")]
    InvalidCost(String),

    #[error("not a main file: no \\begin{{document}} marker")]
    NotMainFile,

    #[error("package conflict at line {line}: {text}")]
    PackageConflict { line: usize, text: String },

    #[error("page mismatch: {0}")]
    PageMismatch(String),

    #[error("caption covers float")]
    CaptionCoversFloat,

    #[error("caption not found (normalized distance {normalized_distance:.3})")]
    CaptionNotFound { normalized_distance: f64 },

    #[error("template does not fit the page at any scale")]
    TemplateTooLarge,

    #[error("invalid threshold {0}: must lie in [0, 1]")]
    InvalidThreshold(f64),

    #[error("malformed {what} at line {line}, column {column}: {message}")]
    Parse {
        what: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("schema mismatch: {0}")]
    Schema(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(what: impl Into<String>, err: &serde_json::Error) -> Self {
        Error::Parse {
            what: what.into(),
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}
