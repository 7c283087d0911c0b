//! Match engine over an indexed corpus.
//!
//! [`find_matches`] evaluates a parsed query sequence: each attribute
//! test is compiled to its lexicon id set, the most selective pattern
//! anchors a single scan, and neighbors are verified around every
//! candidate. Spans never cross text regions and, by default, never
//! cross sentence regions either.
//!
//! [`oracle_find_matches`] is an intentionally naive reference
//! implementation kept free of every optimization above; the test
//! suites check both agree on randomized corpora and queries.

mod compile;
mod concord;
mod error;
mod freq;
mod matcher;
mod oracle;
pub mod testgen;
mod types;

pub use concord::concordance;
pub use error::EngineError;
pub use freq::frequency;
pub use matcher::{find_matches, find_matches_with};
pub use oracle::{oracle_find_matches, oracle_find_matches_with};
pub use types::{FreqRow, FreqTable, KwicLine, MatchOptions, MatchSpan, COUNTED_MATCH, GROUP_ALL, GROUP_NONE};
