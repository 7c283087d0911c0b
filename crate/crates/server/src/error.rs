use thiserror::Error;

/// Errors from the server shell: transport, audit persistence, and replay.
/// Tool-level failures are not here; they travel as JSON-RPC error
/// responses and stay inside the request loop.
#[derive(Debug, Error)]
pub enum ServerError {
    #[error("audit log is unavailable after a write failure; refusing tool calls")]
    AuditPoisoned,

    #[error("audit log line {line}: {reason}")]
    BadAuditRecord { line: usize, reason: String },

    #[error("audit log line {line}: expected seq {expected}, found {found}")]
    SeqGap { line: usize, expected: u64, found: u64 },

    #[error("audit log was recorded against corpus {log} but the loaded index has digest {index}")]
    CorpusDigestMismatch { log: String, index: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
