//! The production matcher and the naive reference matcher must agree
//! exactly, span for span, on randomized corpora and queries.

use corq_engine::testgen::{random_corpus, random_filter, random_query, SplitMix64};
use corq_engine::{find_matches_with, oracle_find_matches_with, MatchOptions};

#[test]
fn matcher_agrees_with_reference_on_random_inputs() {
    let mut rng = SplitMix64::new(0xC0FFEE);
    for corpus_no in 0..10 {
        let index = random_corpus(&mut rng, 400);
        for query_no in 0..25 {
            let query = random_query(&mut rng);
            let filter = random_filter(&mut rng);
            let options = MatchOptions {
                confine_to_sentences: rng.chance(50),
            };
            let fast = find_matches_with(&index, &query, &filter, options).unwrap();
            let slow = oracle_find_matches_with(&index, &query, &filter, options).unwrap();
            assert_eq!(
                fast, slow,
                "corpus {corpus_no} query {query_no}: `{query}` filter `{filter}` {options:?}"
            );
        }
    }
}

#[test]
fn spans_are_sorted_unique_and_in_bounds() {
    let mut rng = SplitMix64::new(0xBEEF);
    for _ in 0..8 {
        let index = random_corpus(&mut rng, 300);
        for _ in 0..15 {
            let query = random_query(&mut rng);
            let filter = random_filter(&mut rng);
            let spans =
                find_matches_with(&index, &query, &filter, MatchOptions::default()).unwrap();
            for w in spans.windows(2) {
                assert!(w[0].start < w[1].start, "sorted, one span per start");
            }
            for s in &spans {
                assert_eq!(s.len(), query.len());
                assert!(s.end < index.token_count());
            }
        }
    }
}

/// Adding a conjunct can only shrink the result set.
#[test]
fn filters_are_monotone() {
    let mut rng = SplitMix64::new(0xFEED);
    for _ in 0..8 {
        let index = random_corpus(&mut rng, 300);
        for _ in 0..15 {
            let query = random_query(&mut rng);
            let base = random_filter(&mut rng);
            let mut stricter = base.clone();
            stricter.conjuncts.extend(random_filter(&mut rng).conjuncts);
            let unfiltered = find_matches_with(
                &index,
                &query,
                &corq_cqp::MetadataFilter::empty(),
                MatchOptions::default(),
            )
            .unwrap();
            let loose = find_matches_with(&index, &query, &base, MatchOptions::default()).unwrap();
            let tight =
                find_matches_with(&index, &query, &stricter, MatchOptions::default()).unwrap();
            assert!(loose.iter().all(|s| unfiltered.contains(s)));
            assert!(tight.iter().all(|s| loose.contains(s)));
        }
    }
}
