//! Query language frontend: a strict subset of CQP token-pattern syntax.
//!
//! Supported: sequences of bracketed token patterns with boolean
//! combinations of anchored-regex attribute tests, the `%c` flag, `[]`,
//! and bare-string shorthand. Everything else in CQP (quantifiers,
//! `within`, global constraints) is rejected with a dedicated error so
//! callers never get silently wrong match semantics.

mod ast;
mod error;
mod lexer;
mod parser;

pub use ast::{AttrTest, MetaConjunct, MetadataFilter, PatternExpr, QueryAst, TestOp, TokenPattern};
pub use error::ParseError;
pub use parser::{parse_group_by, parse_metadata_filter, parse_query};
