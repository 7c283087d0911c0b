//! Sequence matching. Two-tier plan: pick the most selective token
//! pattern as a scan anchor via its lexicon id set, verify neighbors
//! around each candidate, fall back to a full positional scan when no
//! pattern narrows anything down.

use corq_corpus::{CorpusIndex, Layer};
use corq_cqp::{MetadataFilter, QueryAst, TestOp};

use crate::compile::{anchor, compile, pattern_matches, CompiledQuery};
use crate::error::EngineError;
use crate::types::{MatchOptions, MatchSpan};

/// All spans matching `query` under `filter`, sorted by start position,
/// with default options (sentence confinement on).
pub fn find_matches(
    index: &CorpusIndex,
    query: &QueryAst,
    filter: &MetadataFilter,
) -> Result<Vec<MatchSpan>, EngineError> {
    find_matches_with(index, query, filter, MatchOptions::default())
}

pub fn find_matches_with(
    index: &CorpusIndex,
    query: &QueryAst,
    filter: &MetadataFilter,
    options: MatchOptions,
) -> Result<Vec<MatchSpan>, EngineError> {
    let compiled = compile(index, query)?;
    let k = compiled.len();
    let n = index.token_count();
    if n < k {
        return Ok(Vec::new());
    }

    let mut spans = Vec::new();
    let mut push_if_match = |start: usize| {
        let end = start + k - 1;
        let all = (0..k).all(|j| pattern_matches(&compiled.patterns[j], index, start + j));
        if all && span_within_regions(index, start, end, options) && filter_accepts(index, filter, start)
        {
            spans.push(MatchSpan { start, end });
        }
    };

    match best_anchor(&compiled) {
        Some(offset) => {
            let (attr, ids) = anchor(&compiled.patterns[offset]).unwrap();
            let column = index.attribute(attr);
            for pos in 0..n {
                if ids.contains(column.token_id(pos)) {
                    if pos < offset {
                        continue;
                    }
                    let start = pos - offset;
                    if start + k <= n {
                        push_if_match(start);
                    }
                }
            }
        }
        None => {
            for start in 0..=(n - k) {
                push_if_match(start);
            }
        }
    }
    Ok(spans)
}

/// Offset of the pattern with the smallest anchor id set, if any.
fn best_anchor(compiled: &CompiledQuery) -> Option<usize> {
    compiled
        .patterns
        .iter()
        .enumerate()
        .filter_map(|(i, p)| anchor(p).map(|(_, ids)| (i, ids.count())))
        .min_by_key(|&(_, count)| count)
        .map(|(i, _)| i)
}

/// A span never crosses a text boundary. When sentence confinement is
/// on and the span starts inside an s region, it must end there too.
fn span_within_regions(
    index: &CorpusIndex,
    start: usize,
    end: usize,
    options: MatchOptions,
) -> bool {
    match index.region_at(Layer::Text, start) {
        Some(text) => {
            if end > text.end {
                return false;
            }
        }
        None => return false,
    }
    if options.confine_to_sentences {
        if let Some(s) = index.region_at(Layer::S, start) {
            if end > s.end {
                return false;
            }
        }
    }
    true
}

/// Conjunction over metadata constraints, evaluated at the span start.
/// `!=` is the exact complement of `=`: it also holds when the region
/// lacks the attribute or no region of that layer covers the position.
fn filter_accepts(index: &CorpusIndex, filter: &MetadataFilter, start: usize) -> bool {
    filter.conjuncts.iter().all(|c| {
        let value = index
            .region_at(c.layer, start)
            .and_then(|r| r.attrs.get(&c.attr));
        let eq = value.is_some_and(|v| v == &c.value);
        match c.op {
            TestOp::Eq => eq,
            TestOp::NotEq => !eq,
        }
    })
}
