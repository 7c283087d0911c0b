use std::collections::BTreeMap;

/// Inclusive token interval matched by a query. Spans from one query
/// all have the same length and are reported sorted by `start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MatchSpan {
    pub start: usize,
    pub end: usize,
}

impl MatchSpan {
    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false // end >= start by construction
    }
}

/// Matching knobs. Text-region confinement always applies; sentence
/// confinement is on by default and can be dropped for corpora whose
/// `<s>` markup is unreliable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchOptions {
    pub confine_to_sentences: bool,
}

impl Default for MatchOptions {
    fn default() -> Self {
        MatchOptions {
            confine_to_sentences: true,
        }
    }
}

/// One concordance line: the matched tokens with their surrounding
/// context, clipped at text-region boundaries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KwicLine {
    pub position: usize,
    pub left: Vec<String>,
    pub keyword: Vec<String>,
    pub right: Vec<String>,
    /// Metadata of the covering text region plus, when present, the
    /// covering s region at the span start.
    pub meta: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreqRow {
    pub group: String,
    pub counted: String,
    pub count: u64,
}

/// Frequency table over matches. `group` is `"(all)"` when ungrouped;
/// `counted` is `"(match)"` when no count_by attribute was given.
/// `group_token_totals` carries per-group corpus sizes so callers can
/// normalize counts to rates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreqTable {
    pub rows: Vec<FreqRow>,
    pub group_token_totals: BTreeMap<String, u64>,
    pub total_hits: u64,
}

/// Group label for spans outside any region carrying the attribute.
pub const GROUP_NONE: &str = "(none)";
/// Group label used when no group_by was requested.
pub const GROUP_ALL: &str = "(all)";
/// Counted label used when no count_by was requested.
pub const COUNTED_MATCH: &str = "(match)";
