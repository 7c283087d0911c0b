//! Randomized round-trip and monotonicity checks.

use std::collections::BTreeMap;

use proptest::prelude::*;

use corq_corpus::{assign_period, vrt, CorpusIndex, Period};

/// Random well-formed vertical text: 1-4 texts, each 1-20 tokens,
/// optional sentence markup and metadata.
fn arb_vrt() -> impl Strategy<Value = String> {
    let token = prop::collection::vec("[a-zA-Z.&'\"<>-]{1,6}", 6).prop_map(|fields| {
        let mut fields = fields;
        // first column must not look like markup
        if fields[0].starts_with('<') {
            fields[0] = format!("x{}", fields[0]);
        }
        fields.join("\t")
    });
    let sentence = (prop::collection::vec(token, 1..6), any::<bool>()).prop_map(
        |(tokens, tagged)| {
            if tagged {
                format!("<s>\n{}\n</s>", tokens.join("\n"))
            } else {
                tokens.join("\n")
            }
        },
    );
    let text = (
        prop::collection::vec(sentence, 1..4),
        prop::option::of(-2000..2100i32),
        "[a-zA-Z &']{0,12}",
    )
        .prop_map(|(sentences, year, author)| {
            let mut attrs = vec![format!("author=\"{}\"", vrt::escape_attr(&author))];
            if let Some(y) = year {
                attrs.push(format!("year=\"{y}\""));
            }
            format!(
                "<text {}>\n{}\n</text>",
                attrs.join(" "),
                sentences.join("\n")
            )
        });
    prop::collection::vec(text, 1..5).prop_map(|texts| format!("{}\n", texts.join("\n")))
}

proptest! {
    #[test]
    fn export_reingest_preserves_digest(src in arb_vrt()) {
        let idx = vrt::build_index(src.as_bytes(), "orig").unwrap();
        let mut exported = Vec::new();
        vrt::export_vrt(&idx, &mut exported).unwrap();
        let again = vrt::build_index(exported.as_slice(), "again").unwrap();
        prop_assert_eq!(again.build_digest(), idx.build_digest());

        // and exporting the re-ingested index is byte-identical
        let mut exported2 = Vec::new();
        vrt::export_vrt(&again, &mut exported2).unwrap();
        prop_assert_eq!(exported, exported2);
    }

    #[test]
    fn save_load_preserves_digest(src in arb_vrt()) {
        let idx = vrt::build_index(src.as_bytes(), "orig").unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.idx");
        idx.save(&path).unwrap();
        let loaded = CorpusIndex::load(&path).unwrap();
        prop_assert_eq!(&loaded, &idx);
    }

    #[test]
    fn period_is_monotone_in_year(a in -10_000..10_000i32, b in -10_000..10_000i32) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(assign_period(lo) <= assign_period(hi));
    }

    #[test]
    fn period_is_total(year in any::<i32>()) {
        // no year panics, and boundaries agree with the bucket's label order
        let p = assign_period(year);
        prop_assert!(Period::ALL.contains(&p));
    }
}

#[test]
fn every_token_covered_by_one_text_region() {
    let src = "<text id=\"a\">\nx\tx\tNN\tNN\tdep\t0\ny\ty\tNN\tNN\tdep\t0\n</text>\n<text id=\"b\">\nz\tz\tNN\tNN\tdep\t0\n</text>\n";
    let idx = vrt::build_index(src.as_bytes(), "t").unwrap();
    for pos in 0..idx.token_count() {
        let covering: Vec<_> = idx
            .regions(corq_corpus::Layer::Text)
            .iter()
            .filter(|r| r.contains(pos))
            .collect();
        assert_eq!(covering.len(), 1, "pos {pos}");
    }
}

#[test]
fn metadata_preserved_through_file_round_trip() {
    let mut attrs = BTreeMap::new();
    attrs.insert("author".to_string(), "Brontë".to_string());
    let src = "<text author=\"Bront&#235;\" text_category=\"Essays/Letters\" year=\"1858\">\nso\tso\tRB\tRB\tadvmod\t0\n</text>\n";
    let idx = vrt::build_index(src.as_bytes(), "t").unwrap();
    let region = &idx.regions(corq_corpus::Layer::Text)[0];
    assert_eq!(region.attrs["author"], "Brontë");
    assert_eq!(region.attrs["period"], "late_19c");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.idx");
    idx.save(&path).unwrap();
    let loaded = CorpusIndex::load(&path).unwrap();
    assert_eq!(
        loaded.regions(corq_corpus::Layer::Text)[0].attrs["author"],
        "Brontë"
    );
}
