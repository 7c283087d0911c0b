//! Newline-delimited JSON-RPC 2.0 request loop.
//!
//! One request per line, one response per line, strictly in order. The
//! protocol surface is initialize, tools/list, and tools/call; messages
//! without an id are notifications and get no response. Malformed input
//! never kills the loop: it answers with a JSON-RPC error object instead.

use std::io::{BufRead, Write};
use std::time::Instant;

use corq_corpus::CorpusIndex;
use serde_json::{json, Map, Value};

use crate::audit::AuditLog;
use crate::canon::canonical_json;
use crate::error::ServerError;
use crate::tools::{outcome_digest, ToolCallError, ToolErrorKind, ToolHost};

pub const PARSE_ERROR: i64 = -32700;
pub const INVALID_REQUEST: i64 = -32600;
pub const METHOD_NOT_FOUND: i64 = -32601;
pub const INVALID_PARAMS: i64 = -32602;
pub const TOOL_ERROR: i64 = -32000;

/// The protocol revision echoed to clients that do not request one.
pub const DEFAULT_PROTOCOL_VERSION: &str = "2025-06-18";

pub const SERVER_NAME: &str = "corq-server";

/// Serves requests until the input stream ends. Tool calls are audited
/// before their responses are emitted; once an audit write fails, further
/// tool calls are refused while the rest of the protocol stays up.
pub fn serve<R: BufRead, W: Write>(
    index: &CorpusIndex,
    input: R,
    mut output: W,
    log: &mut AuditLog,
) -> Result<(), ServerError> {
    let host = ToolHost::new(index);
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        if let Some(response) = handle_line(&host, &line, log) {
            output.write_all(canonical_json(&response).as_bytes())?;
            output.write_all(b"\n")?;
            output.flush()?;
        }
    }
    Ok(())
}

/// Processes one raw input line; `None` means no response (notification).
pub fn handle_line(host: &ToolHost, line: &str, log: &mut AuditLog) -> Option<Value> {
    let parsed: Value = match serde_json::from_str(line) {
        Ok(v) => v,
        Err(e) => return Some(error_response(Value::Null, PARSE_ERROR, &format!("parse error: {e}"))),
    };
    let request = match parsed {
        Value::Object(map) => map,
        _ => return Some(error_response(Value::Null, INVALID_REQUEST, "request must be an object")),
    };
    let id = request.get("id").cloned();
    let method = match request.get("method").and_then(Value::as_str) {
        Some(m) => m,
        None => {
            // A malformed notification still gets no response.
            let id = id?;
            return Some(error_response(id, INVALID_REQUEST, "missing method"));
        }
    };
    let params = request.get("params").cloned().unwrap_or(Value::Null);

    // No id: notification. Nothing to answer, and the graceful no-op for
    // notifications means we do not execute tools fired this way either.
    let id = id?;

    Some(match method {
        "initialize" => result_response(id, initialize_result(&params)),
        "tools/list" => result_response(id, json!({ "tools": ToolHost::descriptors() })),
        "tools/call" => tools_call(host, id, &params, log),
        other => error_response(id, METHOD_NOT_FOUND, &format!("method not found: {other}")),
    })
}

fn initialize_result(params: &Value) -> Value {
    let requested = params
        .get("protocolVersion")
        .and_then(Value::as_str)
        .unwrap_or(DEFAULT_PROTOCOL_VERSION);
    json!({
        "protocolVersion": requested,
        "serverInfo": { "name": SERVER_NAME, "version": env!("CARGO_PKG_VERSION") },
        "capabilities": { "tools": {} },
    })
}

fn tools_call(host: &ToolHost, id: Value, params: &Value, log: &mut AuditLog) -> Value {
    let params = match params {
        Value::Object(map) => map,
        _ => return error_response(id, INVALID_PARAMS, "params must be an object"),
    };
    let tool = match params.get("name").and_then(Value::as_str) {
        Some(name) => name,
        None => return error_response(id, INVALID_PARAMS, "missing tool name"),
    };
    let arguments = params.get("arguments").cloned().unwrap_or_else(|| Value::Object(Map::new()));

    if log.poisoned() {
        return error_response(id, TOOL_ERROR, &ServerError::AuditPoisoned.to_string());
    }

    let started = Instant::now();
    let outcome = host.call(tool, &arguments);
    let duration_ms = started.elapsed().as_millis() as u64;

    // The audit record precedes the response; a call that cannot be
    // recorded reports failure instead of leaking an unaudited result.
    let digest = outcome_digest(&outcome);
    if let Err(e) =
        log.append(tool, arguments, digest, duration_ms, host.index().build_digest())
    {
        return error_response(id, TOOL_ERROR, &format!("audit append failed: {e}"));
    }

    match outcome {
        Ok(result) => result_response(
            id,
            json!({ "content": [{ "type": "text", "text": canonical_json(&result) }] }),
        ),
        Err(ToolCallError { kind, message }) => {
            let code = match kind {
                ToolErrorKind::InvalidParams => INVALID_PARAMS,
                ToolErrorKind::Execution => TOOL_ERROR,
            };
            error_response(id, code, &message)
        }
    }
}

fn result_response(id: Value, result: Value) -> Value {
    json!({ "jsonrpc": "2.0", "id": id, "result": result })
}

fn error_response(id: Value, code: i64, message: &str) -> Value {
    json!({ "jsonrpc": "2.0", "id": id, "error": { "code": code, "message": message } })
}
