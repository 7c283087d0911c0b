//! Fuzz-safety and print/reparse properties for the query parser.

use proptest::prelude::*;

use corq_cqp::{parse_metadata_filter, parse_query, AttrTest, PatternExpr, QueryAst, TestOp, TokenPattern};
use corq_corpus::Attr;

#[test]
fn workflow_queries_parse() {
    // every query form used by the bundled scripts and documentation
    let queries = [
        r#"[word="so"%c] [pos="JJ.*"]"#,
        r#"[word="most"%c] [pos="JJ.*"]"#,
        r#"[pos!="DT"] [word="most"%c] [pos="JJ.*"]"#,
        r#"[word="really"%c] [pos="JJ.*"]"#,
        r#"[word="really"%c] [deprel="ADJ"]"#,
        r#"[word="very"%c] [deprel="ADJ"]"#,
        r#"[word="utterly"%c] [deprel="ADJ"]"#,
        r#"[word="truly"%c] [deprel="ADJ"]"#,
        r#"[]"#,
        r#"[word="reader"]"#,
    ];
    for q in queries {
        let ast = parse_query(q).unwrap_or_else(|e| panic!("{q}: {e}"));
        assert!(!ast.is_empty());
    }
    parse_metadata_filter(r#"match.text_category="Poetry""#).unwrap();
}

fn arb_attr() -> impl Strategy<Value = Attr> {
    prop::sample::select(Attr::ALL.to_vec())
}

fn arb_pattern_string() -> impl Strategy<Value = String> {
    prop::sample::select(vec![
        "so".to_string(),
        "JJ.*".to_string(),
        "a|b".to_string(),
        "x+".to_string(),
        "he(l)?p".to_string(),
        "a\"b".to_string(),
        "a\\.b".to_string(),
        "[aeiou]+".to_string(),
        "".to_string(),
    ])
}

fn arb_test() -> impl Strategy<Value = PatternExpr> {
    (
        arb_attr(),
        prop::bool::ANY,
        arb_pattern_string(),
        prop::bool::ANY,
    )
        .prop_map(|(attr, ne, pattern, ci)| {
            PatternExpr::Test(AttrTest {
                attr,
                op: if ne { TestOp::NotEq } else { TestOp::Eq },
                pattern,
                case_insensitive: ci,
            })
        })
}

fn arb_expr() -> impl Strategy<Value = PatternExpr> {
    arb_test().prop_recursive(4, 24, 4, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| PatternExpr::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| PatternExpr::Or(Box::new(a), Box::new(b))),
            inner.prop_map(|a| PatternExpr::Not(Box::new(a))),
        ]
    })
}

fn arb_query() -> impl Strategy<Value = QueryAst> {
    prop::collection::vec(
        prop_oneof![
            Just(TokenPattern::MatchAll),
            arb_expr().prop_map(TokenPattern::Expr)
        ],
        1..4,
    )
    .prop_map(|patterns| QueryAst { patterns })
}

proptest! {
    /// Printing an AST and reparsing it reproduces the exact tree.
    #[test]
    fn print_reparse_is_identity(ast in arb_query()) {
        let printed = ast.to_string();
        let reparsed = parse_query(&printed);
        prop_assert_eq!(reparsed, Ok(ast), "printed: {}", printed);
    }

    /// The parser returns Ok or Err; it never panics, whatever the input.
    #[test]
    fn arbitrary_input_never_panics(input in ".{0,60}") {
        let _ = parse_query(&input);
        let _ = parse_metadata_filter(&input);
        let _ = corq_cqp::parse_group_by(&input);
    }

    /// Same for inputs biased toward query-ish character soup.
    #[test]
    fn query_shaped_soup_never_panics(input in "[\\[\\]()!&|=%cd\"\\\\ a-z_.*+?{}0-9:]{0,40}") {
        let _ = parse_query(&input);
        let _ = parse_metadata_filter(&input);
    }
}
