//! Deterministic random corpora, queries, and filters for equivalence
//! testing between the production matcher and the reference matcher.
//! Kept in the library (not a test module) so downstream crates can
//! reuse the same harness.

use corq_corpus::{vrt, Attr, CorpusIndex};
use corq_cqp::{
    AttrTest, MetaConjunct, MetadataFilter, PatternExpr, QueryAst, TestOp, TokenPattern,
};

/// SplitMix64: tiny, seed-stable PRNG so generated fixtures never shift
/// under dependency upgrades.
pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform-ish draw in `0..n` (modulo bias is irrelevant at test sizes).
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0);
        (self.next_u64() % n as u64) as usize
    }

    pub fn chance(&mut self, percent: usize) -> bool {
        self.below(100) < percent
    }

    pub fn pick<'a, T>(&mut self, xs: &'a [T]) -> &'a T {
        &xs[self.below(xs.len())]
    }
}

const WORDS: &[(&str, &str, &str)] = &[
    // (word, pos, deprel)
    ("the", "DT", "det"),
    ("The", "DT", "det"),
    ("a", "DT", "det"),
    ("so", "RB", "advmod"),
    ("So", "RB", "advmod"),
    ("really", "RB", "advmod"),
    ("very", "RB", "advmod"),
    ("good", "JJ", "ADJ"),
    ("Good", "JJ", "ADJ"),
    ("strange", "JJ", "ADJ"),
    ("stranger", "JJR", "ADJ"),
    ("house", "NN", "nsubj"),
    ("time", "NN", "obj"),
    ("is", "VBZ", "cop"),
    ("looms", "VBZ", "root"),
    (".", ".", "punct"),
];

const CATEGORIES: &[&str] = &["Poetry", "Plays/Films/Dramas", "Essays/Letters"];

/// Build a random corpus of roughly `target_tokens` tokens: several
/// texts, a mix of dated/undated and sentence-tagged/untagged.
pub fn random_corpus(rng: &mut SplitMix64, target_tokens: usize) -> CorpusIndex {
    let mut out = String::new();
    let mut produced = 0usize;
    let mut text_no = 0usize;
    while produced < target_tokens {
        text_no += 1;
        let mut attrs = vec![format!("id=\"t{text_no}\"")];
        if rng.chance(80) {
            attrs.push(format!("text_category=\"{}\"", rng.pick(CATEGORIES)));
        }
        if rng.chance(70) {
            let year = -500 + rng.below(2500) as i32;
            attrs.push(format!("year=\"{year}\""));
        }
        out.push_str(&format!("<text {}>\n", attrs.join(" ")));
        let text_tokens = 1 + rng.below(60).min(target_tokens - produced);
        let tagged = rng.chance(70);
        let mut emitted = 0usize;
        while emitted < text_tokens {
            let sentence_len = (1 + rng.below(9)).min(text_tokens - emitted);
            if tagged {
                out.push_str("<s>\n");
            }
            for _ in 0..sentence_len {
                let &(word, pos, deprel) = rng.pick(WORDS);
                let lemma = word.to_lowercase();
                let pos_fine = if rng.chance(20) {
                    format!("{pos}2")
                } else {
                    pos.to_string()
                };
                let head = rng.below(4).to_string();
                out.push_str(&format!(
                    "{word}\t{lemma}\t{pos}\t{pos_fine}\t{deprel}\t{head}\n"
                ));
            }
            if tagged {
                out.push_str("</s>\n");
            }
            emitted += sentence_len;
        }
        produced += text_tokens;
        out.push_str("</text>\n");
    }
    vrt::build_index(out.as_bytes(), "random").expect("generated corpus must ingest")
}

const PATTERNS: &[&str] = &[
    "so", "the", "good", "JJ.*", "NN", "RB", "DT", ".", "s.", "[a-z]+", ".*oo.*", "so|really",
    "advmod", "ADJ", "(g|G)ood", "x{2}", "",
];

fn random_test(rng: &mut SplitMix64) -> PatternExpr {
    PatternExpr::Test(AttrTest {
        attr: *rng.pick(&Attr::ALL),
        op: if rng.chance(25) {
            TestOp::NotEq
        } else {
            TestOp::Eq
        },
        pattern: rng.pick(PATTERNS).to_string(),
        case_insensitive: rng.chance(40),
    })
}

fn random_expr(rng: &mut SplitMix64, depth: usize) -> PatternExpr {
    if depth == 0 || rng.chance(55) {
        return random_test(rng);
    }
    match rng.below(3) {
        0 => PatternExpr::And(
            Box::new(random_expr(rng, depth - 1)),
            Box::new(random_expr(rng, depth - 1)),
        ),
        1 => PatternExpr::Or(
            Box::new(random_expr(rng, depth - 1)),
            Box::new(random_expr(rng, depth - 1)),
        ),
        _ => PatternExpr::Not(Box::new(random_expr(rng, depth - 1))),
    }
}

/// Random query: one to three positions, occasionally `[]`.
pub fn random_query(rng: &mut SplitMix64) -> QueryAst {
    let len = 1 + rng.below(3);
    let patterns = (0..len)
        .map(|_| {
            if rng.chance(15) {
                TokenPattern::MatchAll
            } else {
                TokenPattern::Expr(random_expr(rng, 2))
            }
        })
        .collect();
    QueryAst { patterns }
}

/// Random metadata filter, empty about half the time.
pub fn random_filter(rng: &mut SplitMix64) -> MetadataFilter {
    if rng.chance(50) {
        return MetadataFilter::empty();
    }
    let n = 1 + rng.below(2);
    let conjuncts = (0..n)
        .map(|_| {
            let (attr, value) = match rng.below(3) {
                0 => ("text_category", rng.pick(CATEGORIES).to_string()),
                1 => ("period", rng.pick(&["ancient", "late_19c", "c18"]).to_string()),
                _ => ("year", (1500 + rng.below(600)).to_string()),
            };
            MetaConjunct {
                layer: corq_corpus::Layer::Text,
                attr: attr.to_string(),
                op: if rng.chance(30) {
                    TestOp::NotEq
                } else {
                    TestOp::Eq
                },
                value,
            }
        })
        .collect();
    MetadataFilter { conjuncts }
}
