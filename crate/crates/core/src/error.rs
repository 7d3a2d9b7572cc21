use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used to map failures onto process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Config,
    Data,
    Numeric,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("aligned parts differ in sentence count: `{part}` has {found}, `{reference}` has {expected}")]
    Alignment {
        part: String,
        reference: String,
        expected: usize,
        found: usize,
    },
    #[error("part `{0}` has no lines")]
    EmptyPart(String),
    #[error("unknown part `{0}`")]
    UnknownPart(String),
    #[error("duplicate part name `{0}`")]
    DuplicatePart(String),
    #[error("part `{0}` is not aligned")]
    NotAligned(String),
    #[error("sentence {sentence} out of range (part has {count} sentences)")]
    SentenceOutOfRange { sentence: usize, count: usize },
    #[error("no form passes the frequency filter")]
    EmptyTable,
    #[error("empty part range: {0}")]
    EmptyRange(String),
    #[error("empty segment scope")]
    EmptyScope,
    #[error("zero total frequency")]
    ZeroFrequency,
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("empty sentence")]
    EmptySentence,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate table: {0}")]
    DegenerateTable(String),
    #[error("decomposition did not converge: {0}")]
    Convergence(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("constant vector: {0}")]
    ConstantVector(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("manifest line {line}: {message}")]
    Manifest { line: usize, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        use Error::*;
        match self {
            InvalidArgument(_)
            | Manifest { .. }
            | Io { .. }
            | Json(_)
            | UnknownPart(_)
            | DuplicatePart(_)
            | EmptyRange(_) => ErrorCategory::Config,
            Alignment { .. }
            | EmptyPart(_)
            | NotAligned(_)
            | SentenceOutOfRange { .. }
            | EmptyTable
            | EmptyScope
            | ZeroFrequency
            | EmptyCorpus
            | EmptySentence
            | LengthMismatch { .. } => ErrorCategory::Data,
            Domain(_) | DegenerateTable(_) | Convergence(_) | DimensionMismatch { .. } | ConstantVector(_) => {
                ErrorCategory::Numeric
            }
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
