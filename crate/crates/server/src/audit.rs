//! Append-only JSONL audit log.
//!
//! One record per tool call, written and flushed before the response goes
//! out. A failed write poisons the log: the server then refuses further
//! tool calls rather than running unaudited, since the log is the
//! reproducibility evidence for the whole session.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use chrono::{SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::ServerError;

/// One audited tool invocation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AuditRecord {
    /// Gapless, strictly increasing from 1 within one log file.
    pub seq: u64,
    /// RFC 3339 UTC instant; informational, not part of replay.
    pub timestamp: String,
    pub tool: String,
    /// The canonicalized tool arguments.
    pub params: Value,
    /// Digest of the canonical result, or of `{"error": message}`.
    pub result_digest: String,
    pub duration_ms: u64,
    /// Identifies the index the call ran against.
    pub corpus_digest: String,
}

pub struct AuditLog {
    writer: BufWriter<File>,
    next_seq: u64,
    poisoned: bool,
    fsync: bool,
}

impl AuditLog {
    /// Opens (or creates) a log file for appending. An existing log is
    /// scanned so new records continue its sequence without gaps.
    pub fn open(path: &Path, fsync: bool) -> Result<AuditLog, ServerError> {
        let mut next_seq = 1;
        if path.exists() {
            let reader = BufReader::new(File::open(path)?);
            for (lineno, line) in reader.lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let record: AuditRecord =
                    serde_json::from_str(&line).map_err(|e| ServerError::BadAuditRecord {
                        line: lineno + 1,
                        reason: e.to_string(),
                    })?;
                if record.seq != next_seq {
                    return Err(ServerError::SeqGap {
                        line: lineno + 1,
                        expected: next_seq,
                        found: record.seq,
                    });
                }
                next_seq = record.seq + 1;
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(AuditLog { writer: BufWriter::new(file), next_seq, poisoned: false, fsync })
    }

    pub fn poisoned(&self) -> bool {
        self.poisoned
    }

    pub fn next_seq(&self) -> u64 {
        self.next_seq
    }

    /// Appends one record and flushes it to the OS (and to disk when fsync
    /// is on). Any failure poisons the log permanently.
    pub fn append(
        &mut self,
        tool: &str,
        params: Value,
        result_digest: String,
        duration_ms: u64,
        corpus_digest: &str,
    ) -> Result<u64, ServerError> {
        if self.poisoned {
            return Err(ServerError::AuditPoisoned);
        }
        let record = AuditRecord {
            seq: self.next_seq,
            timestamp: Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true),
            tool: tool.to_string(),
            params,
            result_digest,
            duration_ms,
            corpus_digest: corpus_digest.to_string(),
        };
        let result = (|| -> std::io::Result<()> {
            let line = serde_json::to_string(&record).expect("audit record serializes");
            self.writer.write_all(line.as_bytes())?;
            self.writer.write_all(b"\n")?;
            self.writer.flush()?;
            if self.fsync {
                self.writer.get_ref().sync_data()?;
            }
            Ok(())
        })();
        match result {
            Ok(()) => {
                let seq = self.next_seq;
                self.next_seq += 1;
                Ok(seq)
            }
            Err(e) => {
                self.poisoned = true;
                Err(ServerError::Io(e))
            }
        }
    }
}

/// Parses a full log file, enforcing the gapless-from-1 sequence invariant.
pub fn read_log<R: BufRead>(reader: R) -> Result<Vec<AuditRecord>, ServerError> {
    let mut records = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: AuditRecord =
            serde_json::from_str(&line).map_err(|e| ServerError::BadAuditRecord {
                line: lineno + 1,
                reason: e.to_string(),
            })?;
        let expected = records.len() as u64 + 1;
        if record.seq != expected {
            return Err(ServerError::SeqGap { line: lineno + 1, expected, found: record.seq });
        }
        records.push(record);
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn appends_are_gapless_and_resume_across_opens() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("audit.jsonl");
        {
            let mut log = AuditLog::open(&path, false).unwrap();
            assert_eq!(log.append("corpus_info", json!({}), "d1".into(), 3, "c").unwrap(), 1);
            assert_eq!(log.append("cqp_query", json!({"query": "[]"}), "d2".into(), 5, "c").unwrap(), 2);
        }
        {
            let mut log = AuditLog::open(&path, false).unwrap();
            assert_eq!(log.next_seq(), 3);
            assert_eq!(log.append("cqp_query", json!({}), "d3".into(), 1, "c").unwrap(), 3);
        }
        let records = read_log(BufReader::new(File::open(&path).unwrap())).unwrap();
        assert_eq!(records.len(), 3);
        assert_eq!(records[2].seq, 3);
        assert!(records[0].timestamp.ends_with('Z'));
    }

    #[test]
    fn gaps_are_rejected_on_read() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("audit.jsonl");
        let mut log = AuditLog::open(&path, false).unwrap();
        log.append("corpus_info", json!({}), "d1".into(), 0, "c").unwrap();
        log.append("corpus_info", json!({}), "d2".into(), 0, "c").unwrap();
        drop(log);

        let content = std::fs::read_to_string(&path).unwrap();
        let mut lines: Vec<&str> = content.lines().collect();
        lines.remove(0);
        let tampered = lines.join("\n");
        let err = read_log(tampered.as_bytes()).unwrap_err();
        assert!(matches!(err, ServerError::SeqGap { expected: 1, found: 2, .. }));
    }

    #[test]
    fn malformed_lines_are_rejected_with_their_line_number() {
        let err = read_log("not json\n".as_bytes()).unwrap_err();
        assert!(matches!(err, ServerError::BadAuditRecord { line: 1, .. }));
    }
}
