use thiserror::Error;

/// Errors produced by the statistics layer.
#[derive(Debug, Error)]
pub enum StatsError {
    #[error("cannot normalize against a corpus of zero tokens")]
    ZeroTokens,

    #[error("observed count {hits} exceeds corpus size {tokens}")]
    HitsExceedTokens { hits: u64, tokens: u64 },

    #[error("collocate profile requires at least one collocate")]
    EmptyCollocates,

    #[error("collocate {lemma:?} has a zero count")]
    ZeroCount { lemma: String },

    #[error("polarity lexicon line {line}: expected `lemma<TAB>polarity`")]
    BadLexiconLine { line: usize },

    #[error("polarity lexicon line {line}: unknown polarity {value:?}")]
    BadPolarity { line: usize, value: String },

    #[error("polarity lexicon line {line}: duplicate entry for {lemma:?}")]
    DuplicateLexiconEntry { line: usize, lemma: String },

    #[error("annotation vectors differ in length ({a} vs {b})")]
    LengthMismatch { a: usize, b: usize },

    #[error("agreement requires at least one annotated item")]
    EmptyAnnotations,

    #[error("no text in the corpus carries a year, so periods cannot be assigned")]
    NoPeriodization,

    #[error("period pools must be disjoint but both contain {period}")]
    OverlappingPools { period: String },

    #[error("{which} period pool has no tokens")]
    EmptyPool { which: String },

    #[error("no diachronic row is labeled {label:?}")]
    UnknownLabel { label: String },

    #[error(transparent)]
    Engine(#[from] corq_engine::EngineError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
