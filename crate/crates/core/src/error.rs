use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate phoneme `{0}`")]
    DuplicatePhoneme(String),
    #[error("unknown phoneme `{0}`")]
    UnknownPhoneme(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("expected a {expected} map, `{id}` has {found} coverage")]
    CoverageMismatch {
        id: String,
        expected: &'static str,
        found: &'static str,
    },
    #[error("map `{0}` has no non-garbage classes")]
    EmptyMap(String),
    #[error("phoneme `{symbol}` appears in classes `{first}` and `{second}`")]
    OverlappingClasses {
        symbol: String,
        first: String,
        second: String,
    },
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("confusion matrix is not square: {0}")]
    Shape(String),
    #[error("labels differ between map and matrix: {0}")]
    LabelMismatch(String),
    #[error("utterance id mismatch: `{reference}` vs `{hypothesis}`")]
    IdMismatch { reference: String, hypothesis: String },
    #[error("reference transcripts contain no labels")]
    EmptyReference,
    #[error("nothing to aggregate")]
    EmptyInput,
    #[error("incomplete sweep: {0}")]
    IncompleteSweep(String),
    #[error("duplicate map id `{0}`")]
    DuplicateMapId(String),
    #[error("unknown map `{0}`")]
    UnknownMap(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    /// Stable name of the error kind, printed by the CLI diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DuplicatePhoneme(_) => "DuplicatePhoneme",
            Error::UnknownPhoneme(_) => "UnknownPhoneme",
            Error::Parse { .. } => "ParseError",
            Error::CoverageMismatch { .. } => "CoverageMismatch",
            Error::EmptyMap(_) => "EmptyMap",
            Error::OverlappingClasses { .. } => "OverlappingClasses",
            Error::InvalidMap(_) => "InvalidMap",
            Error::Shape(_) => "ShapeError",
            Error::LabelMismatch(_) => "LabelMismatch",
            Error::IdMismatch { .. } => "IdMismatch",
            Error::EmptyReference => "EmptyReference",
            Error::EmptyInput => "EmptyInput",
            Error::IncompleteSweep(_) => "IncompleteSweep",
            Error::DuplicateMapId(_) => "DuplicateMapId",
            Error::UnknownMap(_) => "UnknownMap",
            Error::Io(_) => "IoError",
        }
    }
}
