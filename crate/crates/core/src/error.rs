use std::io;
use std::path::PathBuf;

use crate::dimension::Dimension;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("unknown dimension {name:?}; expected one of: {}", Dimension::legal_names())]
    UnknownDimension { name: String },

    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },

    #[error("line {line}: duplicate mapping for relation {relation:?} (scope {scope:?})")]
    DuplicateMapping {
        line: usize,
        relation: String,
        scope: Option<String>,
    },

    #[error("missing mandatory column {0:?} in header")]
    MissingColumn(String),

    #[error("illegal control character in field {field:?} of edge {id:?}")]
    IllegalField { id: String, field: &'static str },

    #[error("edge {id:?}: {message}")]
    Edge { id: String, message: String },

    #[error("inconsistent vector width at row {row}: expected {expected}, found {found}")]
    VectorWidth {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("non-finite component at row {row}")]
    NonFinite { row: usize },

    #[error("duplicate id {id:?} at row {row}")]
    DuplicateId { row: usize, id: String },

    #[error("partitions cover different ids: {0}")]
    IdMismatch(String),

    #[error("unknown source {0:?}")]
    UnknownSource(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn malformed(line: usize, message: impl Into<String>) -> Self {
        Error::Malformed {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn file(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::File {
            path: path.into(),
            source,
        }
    }
}
