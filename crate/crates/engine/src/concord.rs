use corq_corpus::{Attr, CorpusIndex, Layer};

use crate::types::{KwicLine, MatchSpan};

/// Render a page of spans as keyword-in-context lines. `offset` and
/// `limit` page through the span list; contexts are clipped at the
/// boundaries of the covering text region.
pub fn concordance(
    index: &CorpusIndex,
    spans: &[MatchSpan],
    context_width: usize,
    offset: usize,
    limit: usize,
) -> Vec<KwicLine> {
    let words = index.attribute(Attr::Word);
    spans
        .iter()
        .skip(offset)
        .take(limit)
        .map(|span| {
            let text = index
                .region_at(Layer::Text, span.start)
                .expect("span starts inside a text region");
            let left_from = span.start.saturating_sub(context_width).max(text.start);
            let right_to = (span.end + context_width).min(text.end);
            let collect = |from: usize, to: usize| -> Vec<String> {
                (from..=to).map(|p| words.token_value(p).to_string()).collect()
            };
            let mut meta = text.attrs.clone();
            if let Some(s) = index.region_at(Layer::S, span.start) {
                for (k, v) in &s.attrs {
                    meta.insert(k.clone(), v.clone());
                }
            }
            KwicLine {
                position: span.start,
                left: if left_from < span.start {
                    collect(left_from, span.start - 1)
                } else {
                    Vec::new()
                },
                keyword: collect(span.start, span.end),
                right: if span.end < right_to {
                    collect(span.end + 1, right_to)
                } else {
                    Vec::new()
                },
                meta,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use corq_cqp::{parse_metadata_filter, parse_query};

    fn index() -> CorpusIndex {
        let vrt = "\
<text id=\"t1\" text_category=\"Plays/Films/Dramas\">
<s clause_type=\"main\">
This\tthis\tDT\tDT\tdet\t2
is\tbe\tVBZ\tVBZ\tcop\t2
so\tso\tRB\tRB\tadvmod\t4
good\tgood\tJJ\tJJ\tADJ\t0
.\t.\t.\t.\tpunct\t4
</s>
</text>
";
        corq_corpus::vrt::build_index(vrt.as_bytes(), "t").unwrap()
    }

    #[test]
    fn contexts_clip_at_text_edges() {
        let idx = index();
        let spans = crate::find_matches(
            &idx,
            &parse_query("[word=\"so\"] [pos=\"JJ.*\"]").unwrap(),
            &parse_metadata_filter("").unwrap(),
        )
        .unwrap();
        let lines = concordance(&idx, &spans, 8, 0, 20);
        assert_eq!(lines.len(), 1);
        let line = &lines[0];
        assert_eq!(line.position, 2);
        assert_eq!(line.left, vec!["This", "is"]);
        assert_eq!(line.keyword, vec!["so", "good"]);
        assert_eq!(line.right, vec!["."]);
        assert_eq!(line.meta["text_category"], "Plays/Films/Dramas");
        assert_eq!(line.meta["clause_type"], "main");
    }

    #[test]
    fn zero_width_and_paging() {
        let idx = index();
        let spans = crate::find_matches(
            &idx,
            &parse_query("[]").unwrap(),
            &parse_metadata_filter("").unwrap(),
        )
        .unwrap();
        assert_eq!(spans.len(), 5);
        let lines = concordance(&idx, &spans, 0, 0, 100);
        assert!(lines.iter().all(|l| l.left.is_empty() && l.right.is_empty()));

        let page = concordance(&idx, &spans, 2, 3, 2);
        assert_eq!(page.len(), 2);
        assert_eq!(page[0].position, 3);
        // offset past the end yields an empty page, not a panic
        assert!(concordance(&idx, &spans, 2, 99, 5).is_empty());
    }

    #[test]
    fn paging_concatenation_covers_all_spans() {
        let idx = index();
        let spans = crate::find_matches(
            &idx,
            &parse_query("[]").unwrap(),
            &parse_metadata_filter("").unwrap(),
        )
        .unwrap();
        let mut paged = Vec::new();
        let mut offset = 0;
        loop {
            let page = concordance(&idx, &spans, 1, offset, 2);
            if page.is_empty() {
                break;
            }
            offset += page.len();
            paged.extend(page);
        }
        assert_eq!(paged, concordance(&idx, &spans, 1, 0, usize::MAX));
    }
}
