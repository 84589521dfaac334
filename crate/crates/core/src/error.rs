//! Error type shared across the crate.

use std::path::PathBuf;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while loading data, building matrices,
/// fitting maps, or computing measures.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed csv in {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("column {0:?} not found")]
    MissingColumn(String),

    #[error("duplicate column name {0:?} in header")]
    DuplicateColumn(String),

    #[error("empty form at row {row}")]
    EmptyForm { row: usize },

    #[error("form {form:?} at row {row} contains the reserved boundary symbol {boundary:?}")]
    BoundaryInForm {
        form: String,
        row: usize,
        boundary: String,
    },

    #[error("empty value in feature column {column:?} at row {row}")]
    EmptyFeatureValue { column: String, row: usize },

    #[error("order mismatch at line {line}: expected word {expected:?}, found {found:?}")]
    EmbeddingOrderMismatch {
        line: usize,
        expected: String,
        found: String,
    },

    #[error("line {line} has {found} numeric fields, expected {expected}")]
    RaggedEmbedding {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("non-numeric field {field:?} at line {line}")]
    NonNumericField { line: usize, field: String },

    #[error("embedding file covers {found} words, expected {expected}")]
    EmbeddingCountMismatch { expected: usize, found: usize },

    #[error("word {form:?} contains whitespace and cannot be written in embedding format")]
    WhitespaceInForm { form: String },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("unknown lexome {0:?}")]
    UnknownLexome(String),

    #[error("lexome name {0:?} is ambiguous; qualify it as \"column:value\"")]
    AmbiguousLexome(String),

    #[error("semantic matrix was loaded from a file and carries no lexome vectors")]
    LoadedProvenance,

    #[error("shape mismatch: {context} (expected {expected}, found {found})")]
    ShapeMismatch {
        context: &'static str,
        expected: String,
        found: String,
    },

    #[error("matrix contains a non-finite entry")]
    NonFiniteInput,

    #[error("row {row} of {matrix} has zero variance; correlation is undefined")]
    ZeroVarianceRow { matrix: &'static str, row: usize },

    #[error("vector has zero variance; correlation is undefined")]
    ZeroVariance,

    #[error("{context}: index {index} out of range for {len} items")]
    IndexOutOfRange {
        context: &'static str,
        index: usize,
        len: usize,
    },

    #[error("unknown cue ordinal {0}")]
    UnknownCueOrdinal(usize),

    #[error("projection needs at least two cues, found {0}")]
    TooFewCues(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// Whether this error stems from numerical computation rather than
    /// bad input data. Used by callers to pick exit codes.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonFiniteInput
                | Error::ZeroVarianceRow { .. }
                | Error::ZeroVariance
                | Error::Numerical(_)
        )
    }
}
