//! Statistics for corpus frequency work: rate normalization, log-likelihood
//! keyness with effect size, collocate distribution profiles, diachronic
//! period tables, and annotator agreement.
//!
//! Everything here is deterministic arithmetic over counts produced by the
//! query engine; no randomness, no floating-point accumulation order that
//! depends on hash iteration.

mod agreement;
mod collocates;
mod diachronic;
mod error;
mod keyness;

pub use agreement::{agreement_report, cohen_kappa, AgreementReport};
pub use collocates::{
    collocate_profile, collocate_profile_weighted, Classified, CollocateCount, CollocateProfile,
    Polarity, PolarityLexicon, ShareWeighting,
};
pub use diachronic::{
    diachronic_table, pooled_period_comparison, DiachronicCell, DiachronicRow, DiachronicTable,
    PeriodKey,
};
pub use error::StatsError;
pub use keyness::{
    cramers_v_2x2, log_likelihood_g2, log_likelihood_g2_cells, normalize_pmw, G2Cells, G2Result,
    PBucket,
};
