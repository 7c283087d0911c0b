//! Per-period frequency tables and pooled early/late comparisons.
//!
//! Each labeled query is run once over the whole corpus and its matches are
//! bucketed by the period of the text they fall in. Texts without a year go
//! into a dedicated "unknown" bucket so their tokens are never silently
//! dropped from the denominators.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use corq_corpus::{region_at, CorpusIndex, Layer, Period};
use corq_cqp::{MetadataFilter, QueryAst};
use corq_engine::find_matches;
use serde::{Serialize, Serializer};

use crate::error::StatsError;
use crate::keyness::{log_likelihood_g2, G2Result};

/// A period column: one of the eight dated periods or the undated bucket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PeriodKey {
    Known(Period),
    Unknown,
}

impl PeriodKey {
    /// All nine columns in display order, undated last.
    pub fn all() -> impl Iterator<Item = PeriodKey> {
        Period::ALL
            .iter()
            .map(|&p| PeriodKey::Known(p))
            .chain(std::iter::once(PeriodKey::Unknown))
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            PeriodKey::Known(p) => p.as_str(),
            PeriodKey::Unknown => "unknown",
        }
    }
}

impl fmt::Display for PeriodKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PeriodKey {
    type Err = ();

    fn from_str(s: &str) -> Result<PeriodKey, ()> {
        if s == "unknown" {
            Ok(PeriodKey::Unknown)
        } else {
            s.parse::<Period>().map(PeriodKey::Known)
        }
    }
}

impl Serialize for PeriodKey {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// One table cell: raw hits, the period's token mass, and the derived rate.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DiachronicCell {
    pub hits: u64,
    pub tokens: u64,
    pub pmw: f64,
}

/// One labeled query across all periods that have any tokens.
#[derive(Debug, Clone, Serialize)]
pub struct DiachronicRow {
    pub label: String,
    pub cells: BTreeMap<PeriodKey, DiachronicCell>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiachronicTable {
    pub rows: Vec<DiachronicRow>,
    /// Token mass per period; periods the corpus does not cover are absent.
    pub period_token_totals: BTreeMap<PeriodKey, u64>,
}

/// Builds a period table for a set of labeled queries under one filter.
///
/// Cells exist for every period with tokens, including zero-hit cells, so
/// rates are comparable across rows. A corpus where no text carries a year
/// has nothing to periodize and is rejected.
pub fn diachronic_table(
    index: &CorpusIndex,
    queries: &[(String, QueryAst)],
    filter: &MetadataFilter,
) -> Result<DiachronicTable, StatsError> {
    let mut period_token_totals: BTreeMap<PeriodKey, u64> = BTreeMap::new();
    let mut any_period = false;
    for region in index.regions(Layer::Text) {
        let key = match region.attrs.get("period") {
            Some(label) => {
                any_period = true;
                // Ingest wrote this label from the year column, so it parses.
                PeriodKey::Known(label.parse::<Period>().expect("stored period label"))
            }
            None => PeriodKey::Unknown,
        };
        *period_token_totals.entry(key).or_insert(0) += region.len() as u64;
    }
    if !any_period {
        return Err(StatsError::NoPeriodization);
    }

    let mut rows = Vec::with_capacity(queries.len());
    for (label, query) in queries {
        let spans = find_matches(index, query, filter)?;
        let mut hit_counts: BTreeMap<PeriodKey, u64> = BTreeMap::new();
        for span in &spans {
            // Matching already confines spans to text regions, so a covering
            // region always exists.
            let region = region_at(index.regions(Layer::Text), span.start)
                .expect("match span inside a text region");
            let key = match region.attrs.get("period") {
                Some(label) => PeriodKey::Known(label.parse::<Period>().expect("stored period label")),
                None => PeriodKey::Unknown,
            };
            *hit_counts.entry(key).or_insert(0) += 1;
        }
        let cells = period_token_totals
            .iter()
            .map(|(&key, &tokens)| {
                let hits = hit_counts.get(&key).copied().unwrap_or(0);
                let pmw = hits as f64 / tokens as f64 * 1_000_000.0;
                (key, DiachronicCell { hits, tokens, pmw })
            })
            .collect();
        rows.push(DiachronicRow { label: label.clone(), cells });
    }

    Ok(DiachronicTable { rows, period_token_totals })
}

/// Pools disjoint early and late period sets from one table row and runs the
/// keyness comparison on the pooled hit and token counts.
pub fn pooled_period_comparison(
    table: &DiachronicTable,
    label: &str,
    early: &[Period],
    late: &[Period],
) -> Result<G2Result, StatsError> {
    for p in early {
        if late.contains(p) {
            return Err(StatsError::OverlappingPools { period: p.to_string() });
        }
    }
    let row = table
        .rows
        .iter()
        .find(|r| r.label == label)
        .ok_or_else(|| StatsError::UnknownLabel { label: label.to_string() })?;

    let pool = |periods: &[Period], which: &str| -> Result<(u64, u64), StatsError> {
        let mut hits = 0;
        let mut tokens = 0;
        for &p in periods {
            if let Some(cell) = row.cells.get(&PeriodKey::Known(p)) {
                hits += cell.hits;
                tokens += cell.tokens;
            }
        }
        if tokens == 0 {
            return Err(StatsError::EmptyPool { which: which.to_string() });
        }
        Ok((hits, tokens))
    };
    let (early_hits, early_tokens) = pool(early, "early")?;
    let (late_hits, late_tokens) = pool(late, "late")?;
    log_likelihood_g2(early_hits, early_tokens, late_hits, late_tokens)
}
