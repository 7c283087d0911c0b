use std::collections::BTreeMap;

use corq_corpus::{Attr, CorpusIndex, Layer};

use crate::error::EngineError;
use crate::types::{FreqRow, FreqTable, MatchSpan, COUNTED_MATCH, GROUP_ALL, GROUP_NONE};

/// Tabulate spans. `count_by` selects the attribute whose values are
/// counted (whole-span values joined by spaces, or a single token's
/// value when `count_token` gives its offset); `group_by` names a
/// structural attribute to cross-tabulate against. Rows come sorted by
/// descending count, ties broken lexicographically.
pub fn frequency(
    index: &CorpusIndex,
    spans: &[MatchSpan],
    count_by: Option<Attr>,
    count_token: Option<usize>,
    group_by: Option<&str>,
) -> Result<FreqTable, EngineError> {
    if count_token.is_some() && count_by.is_none() {
        return Err(EngineError::CountTokenWithoutCountBy);
    }
    let group_layer = group_by.map(|name| resolve_group_layer(index, name)).transpose()?;

    let mut cells: BTreeMap<(String, String), u64> = BTreeMap::new();
    for span in spans {
        let group = match (group_by, group_layer) {
            (Some(name), Some(layer)) => index
                .region_at(layer, span.start)
                .and_then(|r| r.attrs.get(name))
                .cloned()
                .unwrap_or_else(|| GROUP_NONE.to_string()),
            _ => GROUP_ALL.to_string(),
        };
        let counted = match count_by {
            None => COUNTED_MATCH.to_string(),
            Some(attr) => {
                let column = index.attribute(attr);
                match count_token {
                    Some(i) => {
                        if i >= span.len() {
                            return Err(EngineError::CountTokenOutOfRange {
                                index: i,
                                len: span.len(),
                            });
                        }
                        column.token_value(span.start + i).to_string()
                    }
                    None => (span.start..=span.end)
                        .map(|p| column.token_value(p))
                        .collect::<Vec<_>>()
                        .join(" "),
                }
            }
        };
        *cells.entry((group, counted)).or_insert(0) += 1;
    }

    let group_token_totals = match (group_by, group_layer) {
        (Some(name), Some(layer)) => group_totals(index, layer, name),
        _ => BTreeMap::from([(GROUP_ALL.to_string(), index.token_count() as u64)]),
    };

    let mut rows: Vec<FreqRow> = cells
        .into_iter()
        .map(|((group, counted), count)| FreqRow {
            group,
            counted,
            count,
        })
        .collect();
    rows.sort_by(|a, b| {
        b.count
            .cmp(&a.count)
            .then_with(|| a.group.cmp(&b.group))
            .then_with(|| a.counted.cmp(&b.counted))
    });

    Ok(FreqTable {
        rows,
        group_token_totals,
        total_hits: spans.len() as u64,
    })
}

/// Layer carrying `name`, per what the index actually contains.
/// Present on both layers is ambiguous and refused.
fn resolve_group_layer(index: &CorpusIndex, name: &str) -> Result<Layer, EngineError> {
    let on_text = index.layer_attr_names(Layer::Text).contains(name);
    let on_s = index.layer_attr_names(Layer::S).contains(name);
    match (on_text, on_s) {
        (true, true) => Err(EngineError::AmbiguousGroupAttr(name.to_string())),
        (true, false) => Ok(Layer::Text),
        (false, true) => Ok(Layer::S),
        (false, false) => Err(EngineError::UnknownGroupAttr(name.to_string())),
    }
}

/// Token totals per attribute value, plus a `(none)` bucket for tokens
/// not covered by a region carrying the attribute.
fn group_totals(index: &CorpusIndex, layer: Layer, name: &str) -> BTreeMap<String, u64> {
    let mut totals: BTreeMap<String, u64> = BTreeMap::new();
    let mut covered = 0u64;
    for region in index.regions(layer) {
        if let Some(value) = region.attrs.get(name) {
            *totals.entry(value.clone()).or_insert(0) += region.len() as u64;
            covered += region.len() as u64;
        }
    }
    let uncovered = index.token_count() as u64 - covered;
    if uncovered > 0 {
        totals.insert(GROUP_NONE.to_string(), uncovered);
    }
    totals
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::find_matches;
    use corq_cqp::{parse_metadata_filter, parse_query};

    fn index() -> CorpusIndex {
        let vrt = "\
<text id=\"t1\" text_category=\"Plays/Films/Dramas\">
so\tso\tRB\tRB\tadvmod\t2
good\tgood\tJJ\tJJ\tADJ\t0
so\tso\tRB\tRB\tadvmod\t4
strange\tstrange\tJJ\tJJ\tADJ\t0
.\t.\t.\t.\tpunct\t0
</text>
<text id=\"t2\" text_category=\"Poetry\">
so\tso\tRB\tRB\tadvmod\t2
good\tgood\tJJ\tJJ\tADJ\t0
</text>
<text id=\"t3\">
so\tso\tRB\tRB\tadvmod\t2
deep\tdeep\tJJ\tJJ\tADJ\t0
</text>
";
        corq_corpus::vrt::build_index(vrt.as_bytes(), "t").unwrap()
    }

    fn so_adj_spans(idx: &CorpusIndex) -> Vec<MatchSpan> {
        find_matches(
            idx,
            &parse_query("[word=\"so\"] [pos=\"JJ\"]").unwrap(),
            &parse_metadata_filter("").unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn grouped_count_by_word_with_none_bucket() {
        let idx = index();
        let spans = so_adj_spans(&idx);
        let table = frequency(&idx, &spans, Some(Attr::Word), None, Some("text_category")).unwrap();
        assert_eq!(table.total_hits, 4);
        let as_tuples: Vec<(&str, &str, u64)> = table
            .rows
            .iter()
            .map(|r| (r.group.as_str(), r.counted.as_str(), r.count))
            .collect();
        assert_eq!(
            as_tuples,
            vec![
                ("(none)", "so deep", 1),
                ("Plays/Films/Dramas", "so good", 1),
                ("Plays/Films/Dramas", "so strange", 1),
                ("Poetry", "so good", 1),
            ]
        );
        assert_eq!(table.group_token_totals["Plays/Films/Dramas"], 5);
        assert_eq!(table.group_token_totals["Poetry"], 2);
        assert_eq!(table.group_token_totals["(none)"], 2);
    }

    #[test]
    fn count_token_selects_one_position() {
        let idx = index();
        let spans = so_adj_spans(&idx);
        let table = frequency(&idx, &spans, Some(Attr::Lemma), Some(1), None).unwrap();
        let as_tuples: Vec<(&str, u64)> = table
            .rows
            .iter()
            .map(|r| (r.counted.as_str(), r.count))
            .collect();
        assert_eq!(as_tuples, vec![("good", 2), ("deep", 1), ("strange", 1)]);
        assert_eq!(table.group_token_totals[GROUP_ALL], 9);
    }

    #[test]
    fn ungrouped_uncounted_is_a_single_cell() {
        let idx = index();
        let spans = so_adj_spans(&idx);
        let table = frequency(&idx, &spans, None, None, None).unwrap();
        assert_eq!(table.rows.len(), 1);
        assert_eq!(table.rows[0].group, GROUP_ALL);
        assert_eq!(table.rows[0].counted, COUNTED_MATCH);
        assert_eq!(table.rows[0].count, 4);
    }

    #[test]
    fn grouped_counts_sum_to_ungrouped() {
        let idx = index();
        let spans = so_adj_spans(&idx);
        let grouped =
            frequency(&idx, &spans, Some(Attr::Word), None, Some("text_category")).unwrap();
        let ungrouped = frequency(&idx, &spans, Some(Attr::Word), None, None).unwrap();
        let grouped_sum: u64 = grouped.rows.iter().map(|r| r.count).sum();
        let ungrouped_sum: u64 = ungrouped.rows.iter().map(|r| r.count).sum();
        assert_eq!(grouped_sum, ungrouped_sum);
        assert_eq!(grouped_sum, grouped.total_hits);
    }

    #[test]
    fn errors() {
        let idx = index();
        let spans = so_adj_spans(&idx);
        assert!(matches!(
            frequency(&idx, &spans, Some(Attr::Word), None, Some("genre")),
            Err(EngineError::UnknownGroupAttr(_))
        ));
        assert!(matches!(
            frequency(&idx, &spans, Some(Attr::Word), Some(2), None),
            Err(EngineError::CountTokenOutOfRange { index: 2, len: 2 })
        ));
        assert!(matches!(
            frequency(&idx, &spans, None, Some(0), None),
            Err(EngineError::CountTokenWithoutCountBy)
        ));
    }

    #[test]
    fn ambiguous_attribute_refused() {
        // "id" on both a text and an s region
        let vrt = "<text id=\"a\">\n<s id=\"s1\">\nx\tx\tNN\tNN\tdep\t0\n</s>\n</text>\n";
        let idx = corq_corpus::vrt::build_index(vrt.as_bytes(), "t").unwrap();
        let spans = vec![MatchSpan { start: 0, end: 0 }];
        assert!(matches!(
            frequency(&idx, &spans, None, None, Some("id")),
            Err(EngineError::AmbiguousGroupAttr(_))
        ));
    }
}
