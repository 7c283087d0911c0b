use corq_corpus::CorpusError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("query has no token patterns")]
    EmptyQuery,
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("group_by attribute {0:?} not found on any text or s region")]
    UnknownGroupAttr(String),
    #[error("group_by attribute {0:?} is ambiguous (present on both text and s regions)")]
    AmbiguousGroupAttr(String),
    #[error("count_token {index} out of range for a {len}-token match")]
    CountTokenOutOfRange { index: usize, len: usize },
    #[error("count_token requires count_by")]
    CountTokenWithoutCountBy,
}
