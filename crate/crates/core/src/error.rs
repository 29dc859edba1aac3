use thiserror::Error;

/// Problems reading or validating a problem file.
#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("malformed problem document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid field `{field}`: {reason}")]
    Field { field: String, reason: String },
    #[error("matrix structure: {0}")]
    Structure(String),
    #[error("symbols missing from the feature table: {}", .0.join(", "))]
    UnknownSymbols(Vec<String>),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TokenizeError {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("cell `{0}` is not single-space delimited")]
    Separator(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlignError {
    #[error("cannot align an empty word")]
    EmptyWord,
    #[error("source has {source_len} tokens but the stress word has {stress_len}")]
    LengthMismatch { source_len: usize, stress_len: usize },
}

/// Failure to read program surface syntax.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("syntax error at byte {offset}: {message}")]
pub struct SyntaxError {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricError {
    #[error("chrF is undefined for an empty reference")]
    EmptyReference,
}

/// Top-level error for end-to-end runs.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Tokenize(#[from] TokenizeError),
    #[error(transparent)]
    Align(#[from] AlignError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invariant violated: {0}")]
    Invariant(String),
}
