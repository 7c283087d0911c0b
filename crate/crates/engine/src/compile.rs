//! Query compilation: every attribute test is resolved to the set of
//! lexicon ids it matches, so per-token evaluation is id lookups only.

use corq_corpus::{Attr, CorpusIndex};
use corq_cqp::{PatternExpr, QueryAst, TestOp, TokenPattern};

use crate::error::EngineError;

/// Dense bitset over the ids of one lexicon.
pub(crate) struct IdSet {
    blocks: Vec<u64>,
    count: usize,
}

impl IdSet {
    fn from_ids<I: IntoIterator<Item = u32>>(ids: I, lexicon_len: usize) -> Self {
        let mut blocks = vec![0u64; lexicon_len.div_ceil(64)];
        let mut count = 0;
        for id in ids {
            blocks[(id / 64) as usize] |= 1 << (id % 64);
            count += 1;
        }
        IdSet { blocks, count }
    }

    #[inline]
    pub(crate) fn contains(&self, id: u32) -> bool {
        self.blocks[(id / 64) as usize] & (1 << (id % 64)) != 0
    }

    pub(crate) fn count(&self) -> usize {
        self.count
    }
}

pub(crate) enum CompiledExpr {
    /// `negated` complements the flagged match set (the `!=` case).
    Test {
        attr: Attr,
        ids: IdSet,
        negated: bool,
    },
    And(Box<CompiledExpr>, Box<CompiledExpr>),
    Or(Box<CompiledExpr>, Box<CompiledExpr>),
    Not(Box<CompiledExpr>),
}

pub(crate) enum CompiledPattern {
    MatchAll,
    Expr(CompiledExpr),
}

pub(crate) struct CompiledQuery {
    pub(crate) patterns: Vec<CompiledPattern>,
}

impl CompiledQuery {
    pub(crate) fn len(&self) -> usize {
        self.patterns.len()
    }
}

pub(crate) fn compile(index: &CorpusIndex, query: &QueryAst) -> Result<CompiledQuery, EngineError> {
    if query.is_empty() {
        return Err(EngineError::EmptyQuery);
    }
    let patterns = query
        .patterns
        .iter()
        .map(|p| match p {
            TokenPattern::MatchAll => Ok(CompiledPattern::MatchAll),
            TokenPattern::Expr(e) => compile_expr(index, e).map(CompiledPattern::Expr),
        })
        .collect::<Result<Vec<_>, EngineError>>()?;
    Ok(CompiledQuery { patterns })
}

fn compile_expr(index: &CorpusIndex, expr: &PatternExpr) -> Result<CompiledExpr, EngineError> {
    Ok(match expr {
        PatternExpr::Test(t) => {
            let ids = index.lexicon_match(t.attr, &t.pattern, t.case_insensitive)?;
            let lexicon_len = index.attribute(t.attr).lexicon().len();
            CompiledExpr::Test {
                attr: t.attr,
                ids: IdSet::from_ids(ids, lexicon_len),
                negated: t.op == TestOp::NotEq,
            }
        }
        PatternExpr::And(a, b) => CompiledExpr::And(
            Box::new(compile_expr(index, a)?),
            Box::new(compile_expr(index, b)?),
        ),
        PatternExpr::Or(a, b) => CompiledExpr::Or(
            Box::new(compile_expr(index, a)?),
            Box::new(compile_expr(index, b)?),
        ),
        PatternExpr::Not(a) => CompiledExpr::Not(Box::new(compile_expr(index, a)?)),
    })
}

pub(crate) fn eval(expr: &CompiledExpr, index: &CorpusIndex, pos: usize) -> bool {
    match expr {
        CompiledExpr::Test { attr, ids, negated } => {
            ids.contains(index.attribute(*attr).token_id(pos)) != *negated
        }
        CompiledExpr::And(a, b) => eval(a, index, pos) && eval(b, index, pos),
        CompiledExpr::Or(a, b) => eval(a, index, pos) || eval(b, index, pos),
        CompiledExpr::Not(a) => !eval(a, index, pos),
    }
}

pub(crate) fn pattern_matches(pattern: &CompiledPattern, index: &CorpusIndex, pos: usize) -> bool {
    match pattern {
        CompiledPattern::MatchAll => true,
        CompiledPattern::Expr(e) => eval(e, index, pos),
    }
}

/// A necessary condition for `pattern` to match: some positive test,
/// reachable through conjunctions only, whose id set every matching
/// token must hit. Used to pick the scan anchor.
pub(crate) fn anchor(pattern: &CompiledPattern) -> Option<(Attr, &IdSet)> {
    fn walk(expr: &CompiledExpr) -> Option<(Attr, &IdSet)> {
        match expr {
            CompiledExpr::Test {
                attr,
                ids,
                negated: false,
            } => Some((*attr, ids)),
            CompiledExpr::Test { negated: true, .. } => None,
            CompiledExpr::And(a, b) => match (walk(a), walk(b)) {
                (Some(x), Some(y)) => Some(if x.1.count() <= y.1.count() { x } else { y }),
                (x, y) => x.or(y),
            },
            // a disjunction constrains nothing unless both arms do, and
            // the arms may anchor different attributes; skip it
            CompiledExpr::Or(..) | CompiledExpr::Not(..) => None,
        }
    }
    match pattern {
        CompiledPattern::MatchAll => None,
        CompiledPattern::Expr(e) => walk(e),
    }
}
