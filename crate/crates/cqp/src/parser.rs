//! Recursive-descent parser for the query grammar:
//!
//! ```text
//! query   := pattern+
//! pattern := "[" expr? "]" | STRING FLAGS?
//! expr    := term ("|" term)*
//! term    := factor ("&" factor)*
//! factor  := "!" factor | "(" expr ")" | test
//! test    := ATTR ("=" | "!=") STRING FLAGS?
//! FLAGS   := "%" [cd]+
//! ```
//!
//! A bare string is shorthand for `[word="..."]`. Only the `c` flag is
//! honored; `%d` and the rest of CQP (quantifiers, `within`, global
//! constraints) produce dedicated errors rather than silent misparses.

use corq_corpus::{anchored_regex, layer_of_structural_attr, Attr, CorpusError};

use crate::ast::{
    AttrTest, MetaConjunct, MetadataFilter, PatternExpr, QueryAst, TestOp, TokenPattern,
};
use crate::error::ParseError;
use crate::lexer::{lex, Spanned, Tok};

/// Parse a token-sequence query.
pub fn parse_query(source: &str) -> Result<QueryAst, ParseError> {
    let toks = lex(source)?;
    if toks.is_empty() {
        return Err(ParseError::EmptyQuery);
    }
    let mut p = Parser::new(&toks);
    let mut patterns = Vec::new();
    while !p.at_end() {
        patterns.push(p.pattern()?);
    }
    Ok(QueryAst { patterns })
}

/// Parse a metadata filter: conjuncts of `match.attr="value"` joined
/// by `&`. Whitespace-only input yields the empty (always-true) filter.
pub fn parse_metadata_filter(source: &str) -> Result<MetadataFilter, ParseError> {
    let toks = lex(source)?;
    if toks.is_empty() {
        return Ok(MetadataFilter::empty());
    }
    let mut p = Parser::new(&toks);
    let mut conjuncts = vec![p.meta_conjunct()?];
    while !p.at_end() {
        p.expect(&Tok::Amp, "'&' between metadata conjuncts")?;
        if p.at_end() {
            return Err(ParseError::DanglingConjunction);
        }
        conjuncts.push(p.meta_conjunct()?);
    }
    Ok(MetadataFilter { conjuncts })
}

/// Parse a grouping key of the form `match <structural-attribute>`.
/// Returns the attribute name; the layer is resolved against the index.
pub fn parse_group_by(source: &str) -> Result<String, ParseError> {
    let parts: Vec<&str> = source.split_whitespace().collect();
    match parts.as_slice() {
        ["match", attr]
            if attr
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_') =>
        {
            Ok((*attr).to_string())
        }
        _ => Err(ParseError::BadGroupBy {
            found: source.to_string(),
        }),
    }
}

struct Parser<'a> {
    toks: &'a [Spanned],
    i: usize,
}

impl<'a> Parser<'a> {
    fn new(toks: &'a [Spanned]) -> Self {
        Parser { toks, i: 0 }
    }

    fn at_end(&self) -> bool {
        self.i >= self.toks.len()
    }

    fn peek(&self) -> Option<&'a Spanned> {
        self.toks.get(self.i)
    }

    fn next(&mut self, expected: &str) -> Result<&'a Spanned, ParseError> {
        let t = self.toks.get(self.i).ok_or(ParseError::UnexpectedEnd {
            expected: expected.to_string(),
        })?;
        self.i += 1;
        Ok(t)
    }

    fn expect(&mut self, tok: &Tok, expected: &str) -> Result<usize, ParseError> {
        let (t, pos) = self.next(expected)?;
        if t == tok {
            Ok(*pos)
        } else {
            Err(ParseError::UnexpectedToken {
                pos: *pos,
                found: t.describe(),
                expected: expected.to_string(),
            })
        }
    }

    fn pattern(&mut self) -> Result<TokenPattern, ParseError> {
        let (tok, pos) = self.next("a token pattern")?;
        let pattern = match tok {
            Tok::LBracket => {
                if matches!(self.peek(), Some((Tok::RBracket, _))) {
                    self.i += 1;
                    TokenPattern::MatchAll
                } else {
                    let expr = self.expr()?;
                    self.expect(&Tok::RBracket, "']'")?;
                    TokenPattern::Expr(expr)
                }
            }
            // bare string sugar: "so"%c == [word="so"%c]
            Tok::Str(s) => {
                let ci = self.flags()?;
                TokenPattern::Expr(PatternExpr::Test(self.test_from(
                    Attr::Word,
                    TestOp::Eq,
                    s.clone(),
                    ci,
                    *pos,
                )?))
            }
            Tok::Ident(w) if w == "within" => {
                return Err(ParseError::UnsupportedConstruct {
                    pos: *pos,
                    construct: "`within` clause".into(),
                })
            }
            Tok::Question | Tok::Star | Tok::Plus | Tok::LBrace => {
                return Err(ParseError::UnsupportedConstruct {
                    pos: *pos,
                    construct: format!("quantifier {}", tok.describe()),
                })
            }
            Tok::DoubleColon => {
                return Err(ParseError::UnsupportedConstruct {
                    pos: *pos,
                    construct: "global constraint".into(),
                })
            }
            other => {
                return Err(ParseError::UnexpectedToken {
                    pos: *pos,
                    found: other.describe(),
                    expected: "a token pattern".to_string(),
                })
            }
        };
        Ok(pattern)
    }

    fn expr(&mut self) -> Result<PatternExpr, ParseError> {
        let mut left = self.term()?;
        while matches!(self.peek(), Some((Tok::Pipe, _))) {
            self.i += 1;
            let right = self.term()?;
            left = PatternExpr::Or(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn term(&mut self) -> Result<PatternExpr, ParseError> {
        let mut left = self.factor()?;
        while matches!(self.peek(), Some((Tok::Amp, _))) {
            self.i += 1;
            let right = self.factor()?;
            left = PatternExpr::And(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn factor(&mut self) -> Result<PatternExpr, ParseError> {
        match self.peek() {
            Some((Tok::Bang, _)) => {
                self.i += 1;
                Ok(PatternExpr::Not(Box::new(self.factor()?)))
            }
            Some((Tok::LParen, _)) => {
                self.i += 1;
                let expr = self.expr()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(expr)
            }
            _ => self.test().map(PatternExpr::Test),
        }
    }

    fn test(&mut self) -> Result<AttrTest, ParseError> {
        let (tok, pos) = self.next("an attribute test")?;
        let Tok::Ident(name) = tok else {
            return Err(ParseError::UnexpectedToken {
                pos: *pos,
                found: tok.describe(),
                expected: "an attribute name".to_string(),
            });
        };
        let attr: Attr = name
            .parse()
            .map_err(|_| ParseError::UnknownAttribute {
                pos: *pos,
                name: name.clone(),
            })?;
        let (op_tok, op_pos) = self.next("'=' or '!='")?;
        let op = match op_tok {
            Tok::Eq => TestOp::Eq,
            Tok::NotEq => TestOp::NotEq,
            other => {
                return Err(ParseError::UnexpectedToken {
                    pos: *op_pos,
                    found: other.describe(),
                    expected: "'=' or '!='".to_string(),
                })
            }
        };
        let (val_tok, val_pos) = self.next("a quoted pattern")?;
        let Tok::Str(pattern) = val_tok else {
            return Err(ParseError::UnexpectedToken {
                pos: *val_pos,
                found: val_tok.describe(),
                expected: "a quoted pattern".to_string(),
            });
        };
        let ci = self.flags()?;
        self.test_from(attr, op, pattern.clone(), ci, *val_pos)
    }

    fn test_from(
        &self,
        attr: Attr,
        op: TestOp,
        pattern: String,
        case_insensitive: bool,
        pos: usize,
    ) -> Result<AttrTest, ParseError> {
        if let Err(CorpusError::BadRegex { source, .. }) =
            anchored_regex(&pattern, case_insensitive)
        {
            return Err(ParseError::InvalidRegex {
                pos,
                pattern,
                message: source.to_string(),
            });
        }
        Ok(AttrTest {
            attr,
            op,
            pattern,
            case_insensitive,
        })
    }

    /// Consume an optional flags token; true means case-insensitive.
    fn flags(&mut self) -> Result<bool, ParseError> {
        let Some((Tok::Flags(flags), pos)) = self.peek() else {
            return Ok(false);
        };
        self.i += 1;
        let mut ci = false;
        for f in flags.chars() {
            if f == 'c' {
                ci = true;
            } else {
                return Err(ParseError::UnsupportedFlag { pos: *pos, flag: f });
            }
        }
        Ok(ci)
    }

    fn meta_conjunct(&mut self) -> Result<MetaConjunct, ParseError> {
        let (tok, pos) = self.next("`match.` prefix")?;
        if !matches!(tok, Tok::Ident(w) if w == "match") {
            return Err(ParseError::MissingMatchPrefix { pos: *pos });
        }
        if self.expect(&Tok::Dot, "'.' after `match`").is_err() {
            return Err(ParseError::MissingMatchPrefix { pos: *pos });
        }
        let (attr_tok, attr_pos) = self.next("a structural attribute name")?;
        let Tok::Ident(attr) = attr_tok else {
            return Err(ParseError::UnexpectedToken {
                pos: *attr_pos,
                found: attr_tok.describe(),
                expected: "a structural attribute name".to_string(),
            });
        };
        let layer = layer_of_structural_attr(attr).ok_or_else(|| {
            ParseError::UnknownStructuralAttribute {
                pos: *attr_pos,
                name: attr.clone(),
            }
        })?;
        let (op_tok, op_pos) = self.next("'=' or '!='")?;
        let op = match op_tok {
            Tok::Eq => TestOp::Eq,
            Tok::NotEq => TestOp::NotEq,
            other => {
                return Err(ParseError::UnexpectedToken {
                    pos: *op_pos,
                    found: other.describe(),
                    expected: "'=' or '!='".to_string(),
                })
            }
        };
        let (val_tok, val_pos) = self.next("a quoted value")?;
        let Tok::Str(value) = val_tok else {
            return Err(ParseError::UnexpectedToken {
                pos: *val_pos,
                found: val_tok.describe(),
                expected: "a quoted value".to_string(),
            });
        };
        Ok(MetaConjunct {
            layer,
            attr: attr.clone(),
            op,
            value: value.clone(),
        })
    }
}
