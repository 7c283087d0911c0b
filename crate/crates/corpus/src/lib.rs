//! Indexed corpus model.
//!
//! A corpus is ingested from vertical text (one token per line, six
//! tab-separated positional attributes, `<text>`/`<s>` region markup)
//! into an immutable [`CorpusIndex`]: per-attribute lexicons mapping
//! value strings to dense ids, one id array per attribute, and sorted
//! structural regions. Texts carrying a `year` attribute get a derived
//! `period` attribute from a fixed eight-way bucketing.
//!
//! The index round-trips through a binary file format and through
//! vertical-text export; both preserve [`CorpusIndex::build_digest`],
//! a content hash used by the tool server's audit log.

mod attr;
mod error;
mod index;
mod lexicon;
mod period;
mod region;
pub mod vrt;

pub use attr::{layer_of_structural_attr, Attr, Layer};
pub use error::CorpusError;
pub use index::{anchored_regex, CorpusIndex, PositionalAttribute};
pub use lexicon::Lexicon;
pub use period::{assign_period, Period, PeriodTable};
pub use region::{region_at, StructuralRegion};
