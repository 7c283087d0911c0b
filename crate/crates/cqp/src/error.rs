use thiserror::Error;

/// Parse failures. Positions are 1-based character offsets into the
/// source string, suitable for caret diagnostics in single-line queries.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("at {pos}: {message}")]
    Lex { pos: usize, message: String },
    #[error("at {pos}: unexpected {found}, expected {expected}")]
    UnexpectedToken {
        pos: usize,
        found: String,
        expected: String,
    },
    #[error("unexpected end of query, expected {expected}")]
    UnexpectedEnd { expected: String },
    #[error("empty query")]
    EmptyQuery,
    #[error("at {pos}: unknown attribute {name:?} (expected one of word, lemma, pos, pos_fine, deprel, head)")]
    UnknownAttribute { pos: usize, name: String },
    #[error("at {pos}: unsupported flag %{flag} (only %c is supported)")]
    UnsupportedFlag { pos: usize, flag: char },
    #[error("at {pos}: unsupported construct: {construct}")]
    UnsupportedConstruct { pos: usize, construct: String },
    #[error("at {pos}: invalid regex {pattern:?}: {message}")]
    InvalidRegex {
        pos: usize,
        pattern: String,
        message: String,
    },
    #[error("at {pos}: metadata conjuncts must start with `match.`")]
    MissingMatchPrefix { pos: usize },
    #[error("at {pos}: unknown structural attribute {name:?}")]
    UnknownStructuralAttribute { pos: usize, name: String },
    #[error("dangling `&`: expected another metadata conjunct")]
    DanglingConjunction,
    #[error("group_by must have the form \"match <structural-attribute>\", got {found:?}")]
    BadGroupBy { found: String },
}
