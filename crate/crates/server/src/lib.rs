//! JSON-RPC 2.0 tool server over newline-delimited standard streams.
//!
//! Exposes one immutable corpus index through three tools (corpus_info,
//! cqp_query, cqp_frequency), appends every call to a JSONL audit log
//! before responding, and can later re-execute a log to verify that each
//! recorded result digest still reproduces.

mod audit;
mod canon;
mod error;
mod replay;
mod serve;
mod tools;

pub use audit::{read_log, AuditLog, AuditRecord};
pub use canon::{canonical_json, digest_json};
pub use error::ServerError;
pub use replay::{replay_verify, ReplayReport};
pub use serve::{
    handle_line, serve, DEFAULT_PROTOCOL_VERSION, INVALID_PARAMS, INVALID_REQUEST,
    METHOD_NOT_FOUND, PARSE_ERROR, SERVER_NAME, TOOL_ERROR,
};
pub use tools::{outcome_digest, ToolCallError, ToolErrorKind, ToolHost, MAX_RESULTS_CAP};
