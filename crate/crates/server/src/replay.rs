//! Deterministic replay of an audit log.
//!
//! Every logged call is re-executed against the loaded index and its fresh
//! result digest compared with the recorded one. Determinism of the engine
//! makes an empty mismatch list a reproducibility certificate for the
//! original session.

use std::io::BufRead;

use corq_corpus::CorpusIndex;

use crate::audit::read_log;
use crate::error::ServerError;
use crate::tools::{outcome_digest, ToolHost};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplayReport {
    pub records: u64,
    /// Seq numbers whose re-executed digest differs from the logged one.
    pub mismatches: Vec<u64>,
}

impl ReplayReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Re-executes a log against an index. Refuses to run at all when the log
/// was recorded against a different corpus, since every digest would then
/// mismatch for an uninteresting reason.
pub fn replay_verify<R: BufRead>(
    index: &CorpusIndex,
    log: R,
) -> Result<ReplayReport, ServerError> {
    let records = read_log(log)?;
    for record in &records {
        if record.corpus_digest != index.build_digest() {
            return Err(ServerError::CorpusDigestMismatch {
                log: record.corpus_digest.clone(),
                index: index.build_digest().to_string(),
            });
        }
    }

    let host = ToolHost::new(index);
    let mut mismatches = Vec::new();
    for record in &records {
        let outcome = host.call(&record.tool, &record.params);
        if outcome_digest(&outcome) != record.result_digest {
            mismatches.push(record.seq);
        }
    }
    Ok(ReplayReport { records: records.len() as u64, mismatches })
}
