//! Rate normalization and two-corpus keyness.
//!
//! Frequencies are compared as hits per million tokens. Significance uses the
//! log-likelihood statistic G2 over the hit cells, with expected counts taken
//! from the pooled rate, and effect size uses Cramér's V over the full 2x2
//! contingency table. Rather than reporting a pseudo-exact p value, G2 is
//! mapped onto the conventional chi-square cutoffs for one degree of freedom.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::StatsError;

/// Hits per million tokens.
pub fn normalize_pmw(hits: u64, tokens: u64) -> Result<f64, StatsError> {
    if tokens == 0 {
        return Err(StatsError::ZeroTokens);
    }
    if hits > tokens {
        return Err(StatsError::HitsExceedTokens { hits, tokens });
    }
    Ok(hits as f64 / tokens as f64 * 1_000_000.0)
}

/// Significance bucket for a G2 score at one degree of freedom.
///
/// The cutoffs are the standard chi-square critical values; a score equal to
/// a cutoff falls into the stricter bucket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PBucket {
    NotSignificant,
    P05,
    P01,
    P001,
    P0001,
}

impl PBucket {
    pub fn from_g2(g2: f64) -> PBucket {
        if g2 >= 15.13 {
            PBucket::P0001
        } else if g2 >= 10.83 {
            PBucket::P001
        } else if g2 >= 6.63 {
            PBucket::P01
        } else if g2 >= 3.84 {
            PBucket::P05
        } else {
            PBucket::NotSignificant
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            PBucket::NotSignificant => ">=0.05",
            PBucket::P05 => "<0.05",
            PBucket::P01 => "<0.01",
            PBucket::P001 => "<0.001",
            PBucket::P0001 => "<0.0001",
        }
    }
}

impl fmt::Display for PBucket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for PBucket {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// Which cells of the 2x2 table enter the G2 sum.
///
/// The hit-cell form is the default reported by every tool in this workspace;
/// the full four-cell form is kept for cross-checking against packages that
/// sum over the whole table. For hits that are small relative to corpus size
/// the two agree to a fraction of a percent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum G2Cells {
    #[default]
    HitsOnly,
    FullTable,
}

/// A keyness comparison of one phenomenon across two corpora.
#[derive(Debug, Clone, Serialize)]
pub struct G2Result {
    pub hits_a: u64,
    pub tokens_a: u64,
    pub hits_b: u64,
    pub tokens_b: u64,
    pub pmw_a: f64,
    pub pmw_b: f64,
    pub g2: f64,
    pub p_bucket: PBucket,
    pub cramers_v: f64,
}

fn xlogx_ratio(observed: f64, expected: f64) -> f64 {
    // The 0 * ln(0) limit is zero; expected is positive whenever observed is.
    if observed == 0.0 {
        0.0
    } else {
        observed * (observed / expected).ln()
    }
}

/// Log-likelihood keyness over the hit cells (the default form).
pub fn log_likelihood_g2(
    hits_a: u64,
    tokens_a: u64,
    hits_b: u64,
    tokens_b: u64,
) -> Result<G2Result, StatsError> {
    log_likelihood_g2_cells(hits_a, tokens_a, hits_b, tokens_b, G2Cells::HitsOnly)
}

/// Log-likelihood keyness with an explicit choice of summed cells.
pub fn log_likelihood_g2_cells(
    hits_a: u64,
    tokens_a: u64,
    hits_b: u64,
    tokens_b: u64,
    cells: G2Cells,
) -> Result<G2Result, StatsError> {
    let pmw_a = normalize_pmw(hits_a, tokens_a)?;
    let pmw_b = normalize_pmw(hits_b, tokens_b)?;

    let (o1, n1) = (hits_a as f64, tokens_a as f64);
    let (o2, n2) = (hits_b as f64, tokens_b as f64);
    let pooled = (o1 + o2) / (n1 + n2);
    let (e1, e2) = (n1 * pooled, n2 * pooled);

    let mut g2 = 2.0 * (xlogx_ratio(o1, e1) + xlogx_ratio(o2, e2));
    if cells == G2Cells::FullTable {
        let (m1, m2) = (n1 - o1, n2 - o2);
        let miss_pooled = (m1 + m2) / (n1 + n2);
        g2 += 2.0 * (xlogx_ratio(m1, n1 * miss_pooled) + xlogx_ratio(m2, n2 * miss_pooled));
    }
    // Rounding can push an exactly-zero sum a hair negative.
    if g2 < 0.0 && g2 > -1e-9 {
        g2 = 0.0;
    }

    Ok(G2Result {
        hits_a,
        tokens_a,
        hits_b,
        tokens_b,
        pmw_a,
        pmw_b,
        g2,
        p_bucket: PBucket::from_g2(g2),
        cramers_v: cramers_v_2x2(hits_a, tokens_a, hits_b, tokens_b)?,
    })
}

/// Cramér's V over the full 2x2 table (hit/miss by corpus).
///
/// For a 2x2 table V reduces to sqrt(chi2 / N) with N the combined token
/// count. Degenerate tables with an all-zero row or column have no
/// association to measure and report 0.
pub fn cramers_v_2x2(
    hits_a: u64,
    tokens_a: u64,
    hits_b: u64,
    tokens_b: u64,
) -> Result<f64, StatsError> {
    if tokens_a == 0 || tokens_b == 0 {
        return Err(StatsError::ZeroTokens);
    }
    if hits_a > tokens_a {
        return Err(StatsError::HitsExceedTokens { hits: hits_a, tokens: tokens_a });
    }
    if hits_b > tokens_b {
        return Err(StatsError::HitsExceedTokens { hits: hits_b, tokens: tokens_b });
    }
    let (o1, n1) = (hits_a as f64, tokens_a as f64);
    let (o2, n2) = (hits_b as f64, tokens_b as f64);
    let n = n1 + n2;
    let hit_total = o1 + o2;
    let miss_total = n - hit_total;
    if hit_total == 0.0 || miss_total == 0.0 {
        return Ok(0.0);
    }

    let mut chi2 = 0.0;
    for (observed, row_total, col_total) in [
        (o1, n1, hit_total),
        (o2, n2, hit_total),
        (n1 - o1, n1, miss_total),
        (n2 - o2, n2, miss_total),
    ] {
        let expected = row_total * col_total / n;
        let diff = observed - expected;
        chi2 += diff * diff / expected;
    }
    Ok((chi2 / n).sqrt())
}
