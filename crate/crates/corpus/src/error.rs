use thiserror::Error;

/// Errors raised while ingesting vertical text or loading a stored index.
#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: expected {expected} tab-separated fields, found {found}")]
    ColumnCount {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: malformed markup: {reason}")]
    Markup { line: usize, reason: String },
    #[error("line {line}: unbalanced region markup: {reason}")]
    Unbalanced { line: usize, reason: String },
    #[error("line {line}: token outside any <text> region")]
    TokenOutsideText { line: usize },
    #[error("line {line}: empty <{layer}> region (regions must contain at least one token)")]
    EmptyRegion { line: usize, layer: String },
    #[error("line {line}: malformed year attribute {value:?} (expected a decimal integer)")]
    BadYear { line: usize, value: String },
    #[error("line {line}: attribute `period` is reserved (derived from `year` at ingest)")]
    ReservedAttribute { line: usize },
    #[error("invalid regex {pattern:?}: {source}")]
    BadRegex {
        pattern: String,
        #[source]
        source: regex::Error,
    },
    #[error("index file: {0}")]
    IndexFormat(String),
    #[error("index file version mismatch: found {found:#06x}, expected {expected:#06x} (rebuild the index)")]
    VersionMismatch { found: u16, expected: u16 },
    #[error("index file digest check failed (file corrupted or truncated)")]
    DigestMismatch,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
