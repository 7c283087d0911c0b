//! Reference matcher. Deliberately naive: it walks every start
//! position, evaluates each test by running the anchored regex against
//! the token's attribute string, and finds covering regions by linear
//! scan. No lexicon id sets, no anchor selection, no binary search.
//! The production matcher is tested for equivalence against this.

use std::collections::HashMap;

use corq_corpus::{anchored_regex, CorpusIndex, Layer, StructuralRegion};
use corq_cqp::{MetadataFilter, PatternExpr, QueryAst, TestOp, TokenPattern};
use regex::Regex;

use crate::error::EngineError;
use crate::types::{MatchOptions, MatchSpan};

pub fn oracle_find_matches(
    index: &CorpusIndex,
    query: &QueryAst,
    filter: &MetadataFilter,
) -> Result<Vec<MatchSpan>, EngineError> {
    oracle_find_matches_with(index, query, filter, MatchOptions::default())
}

pub fn oracle_find_matches_with(
    index: &CorpusIndex,
    query: &QueryAst,
    filter: &MetadataFilter,
    options: MatchOptions,
) -> Result<Vec<MatchSpan>, EngineError> {
    if query.is_empty() {
        return Err(EngineError::EmptyQuery);
    }
    let mut regexes = RegexCache::default();
    // compile everything up front so invalid patterns fail like the engine
    for p in &query.patterns {
        if let TokenPattern::Expr(e) = p {
            precompile(e, &mut regexes)?;
        }
    }

    let k = query.patterns.len();
    let n = index.token_count();
    let mut spans = Vec::new();
    if n < k {
        return Ok(spans);
    }
    'starts: for start in 0..=(n - k) {
        for (j, pattern) in query.patterns.iter().enumerate() {
            let ok = match pattern {
                TokenPattern::MatchAll => true,
                TokenPattern::Expr(e) => eval(e, index, start + j, &regexes),
            };
            if !ok {
                continue 'starts;
            }
        }
        let end = start + k - 1;

        let Some(text) = linear_covering(index.regions(Layer::Text), start) else {
            continue;
        };
        if end > text.end {
            continue;
        }
        if options.confine_to_sentences {
            if let Some(s) = linear_covering(index.regions(Layer::S), start) {
                if end > s.end {
                    continue;
                }
            }
        }

        let mut accepted = true;
        for c in &filter.conjuncts {
            let region = linear_covering(index.regions(c.layer), start);
            let holds = match region.and_then(|r| r.attrs.get(&c.attr)) {
                Some(v) => match c.op {
                    TestOp::Eq => v == &c.value,
                    TestOp::NotEq => v != &c.value,
                },
                None => c.op == TestOp::NotEq,
            };
            if !holds {
                accepted = false;
                break;
            }
        }
        if accepted {
            spans.push(MatchSpan { start, end });
        }
    }
    Ok(spans)
}

#[derive(Default)]
struct RegexCache {
    map: HashMap<(String, bool), Regex>,
}

impl RegexCache {
    fn get(&self, pattern: &str, ci: bool) -> &Regex {
        &self.map[&(pattern.to_string(), ci)]
    }
}

fn precompile(expr: &PatternExpr, cache: &mut RegexCache) -> Result<(), EngineError> {
    match expr {
        PatternExpr::Test(t) => {
            let key = (t.pattern.clone(), t.case_insensitive);
            if let std::collections::hash_map::Entry::Vacant(slot) = cache.map.entry(key) {
                slot.insert(anchored_regex(&t.pattern, t.case_insensitive)?);
            }
            Ok(())
        }
        PatternExpr::And(a, b) | PatternExpr::Or(a, b) => {
            precompile(a, cache)?;
            precompile(b, cache)
        }
        PatternExpr::Not(a) => precompile(a, cache),
    }
}

fn eval(expr: &PatternExpr, index: &CorpusIndex, pos: usize, cache: &RegexCache) -> bool {
    match expr {
        PatternExpr::Test(t) => {
            let value = index.attribute(t.attr).token_value(pos);
            let matched = cache.get(&t.pattern, t.case_insensitive).is_match(value);
            match t.op {
                TestOp::Eq => matched,
                TestOp::NotEq => !matched,
            }
        }
        PatternExpr::And(a, b) => {
            eval(a, index, pos, cache) && eval(b, index, pos, cache)
        }
        PatternExpr::Or(a, b) => eval(a, index, pos, cache) || eval(b, index, pos, cache),
        PatternExpr::Not(a) => !eval(a, index, pos, cache),
    }
}

fn linear_covering(regions: &[StructuralRegion], pos: usize) -> Option<&StructuralRegion> {
    regions.iter().find(|r| r.start <= pos && pos <= r.end)
}
