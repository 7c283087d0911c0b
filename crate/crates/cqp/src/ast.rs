use std::fmt;

use corq_corpus::{Attr, Layer};

/// Comparison operator in attribute tests and metadata conjuncts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestOp {
    Eq,
    NotEq,
}

impl fmt::Display for TestOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TestOp::Eq => "=",
            TestOp::NotEq => "!=",
        })
    }
}

/// One attribute test: `attr op "pattern"` with optional `%c`.
/// The pattern is a regex that must match the whole attribute value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttrTest {
    pub attr: Attr,
    pub op: TestOp,
    pub pattern: String,
    pub case_insensitive: bool,
}

/// Boolean combination of attribute tests for a single token position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternExpr {
    Test(AttrTest),
    And(Box<PatternExpr>, Box<PatternExpr>),
    Or(Box<PatternExpr>, Box<PatternExpr>),
    Not(Box<PatternExpr>),
}

/// One bracketed position in a query sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenPattern {
    /// `[]`: matches any token.
    MatchAll,
    Expr(PatternExpr),
}

/// A parsed query: a fixed-length sequence of token patterns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryAst {
    pub patterns: Vec<TokenPattern>,
}

impl QueryAst {
    /// Number of token positions a match span covers.
    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }
}

/// One `match.attr op "value"` conjunct; the layer is inferred from the
/// attribute name at parse time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetaConjunct {
    pub layer: Layer,
    pub attr: String,
    pub op: TestOp,
    pub value: String,
}

/// Conjunction of metadata constraints on the regions covering a match.
/// Empty means unconstrained.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MetadataFilter {
    pub conjuncts: Vec<MetaConjunct>,
}

impl MetadataFilter {
    pub fn empty() -> Self {
        MetadataFilter::default()
    }

    pub fn is_empty(&self) -> bool {
        self.conjuncts.is_empty()
    }
}

fn escape_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            _ => out.push(c),
        }
    }
    out
}

impl fmt::Display for AttrTest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}\"{}\"{}",
            self.attr,
            self.op,
            escape_string(&self.pattern),
            if self.case_insensitive { "%c" } else { "" }
        )
    }
}

// Precedence: Or = 1, And = 2, Not = 3. Right operands of the binary
// operators are printed at one level higher so a reparse rebuilds the
// identical left-folded tree.
fn fmt_expr(expr: &PatternExpr, min_prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let prec = match expr {
        PatternExpr::Or(..) => 1,
        PatternExpr::And(..) => 2,
        PatternExpr::Not(..) => 3,
        PatternExpr::Test(..) => 4,
    };
    let parens = prec < min_prec;
    if parens {
        f.write_str("(")?;
    }
    match expr {
        PatternExpr::Test(t) => write!(f, "{t}")?,
        PatternExpr::Or(a, b) => {
            fmt_expr(a, 1, f)?;
            f.write_str(" | ")?;
            fmt_expr(b, 2, f)?;
        }
        PatternExpr::And(a, b) => {
            fmt_expr(a, 2, f)?;
            f.write_str(" & ")?;
            fmt_expr(b, 3, f)?;
        }
        PatternExpr::Not(a) => {
            f.write_str("!")?;
            fmt_expr(a, 3, f)?;
        }
    }
    if parens {
        f.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for PatternExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_expr(self, 0, f)
    }
}

impl fmt::Display for TokenPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenPattern::MatchAll => f.write_str("[]"),
            TokenPattern::Expr(e) => write!(f, "[{e}]"),
        }
    }
}

impl fmt::Display for QueryAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.patterns.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl fmt::Display for MetaConjunct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "match.{}{}\"{}\"",
            self.attr,
            self.op,
            escape_string(&self.value)
        )
    }
}

impl fmt::Display for MetadataFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.conjuncts.iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
