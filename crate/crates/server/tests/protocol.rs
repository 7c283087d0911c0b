//! End-to-end protocol sessions over in-memory streams.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use corq_corpus::vrt::build_index;
use corq_corpus::CorpusIndex;
use corq_server::{read_log, replay_verify, serve, AuditLog, ServerError};
use proptest::prelude::*;
use serde_json::{json, Value};

fn fixture() -> CorpusIndex {
    let vrt = "\
<text id=\"t0\" text_category=\"Poetry\" year=\"1820\">
<s>
so\tso\tRB\tRB\tadvmod\t2
good\tgood\tJJ\tJJ\tamod\t3
stuff\tstuff\tNN\tNN\troot\t0
</s>
</text>
<text id=\"t1\" text_category=\"Drama\">
<s>
so\tso\tRB\tRB\tadvmod\t2
bad\tbad\tJJ\tJJ\tamod\t3
</s>
</text>
";
    build_index(vrt.as_bytes(), "mini").unwrap()
}

/// Runs one session over string input, returning response lines.
fn run_session(index: &CorpusIndex, input: &str, log_path: &Path) -> Vec<String> {
    let mut log = AuditLog::open(log_path, false).unwrap();
    let mut output = Vec::new();
    serve(index, input.as_bytes(), &mut output, &mut log).unwrap();
    String::from_utf8(output).unwrap().lines().map(String::from).collect()
}

fn parse(line: &str) -> Value {
    serde_json::from_str(line).unwrap()
}

#[test]
fn full_session_handshake_tools_and_errors() {
    let index = fixture();
    let dir = tempfile::tempdir().unwrap();
    let log_path = dir.path().join("audit.jsonl");

    let input = [
        r#"{"jsonrpc":"2.0","id":1,"method":"initialize","params":{"protocolVersion":"2025-03-26","capabilities":{},"clientInfo":{"name":"test","version":"0"}}}"#,
        r#"{"jsonrpc":"2.0","method":"notifications/initialized"}"#,
        r#"{"jsonrpc":"2.0","id":2,"method":"tools/list"}"#,
        r#"{"jsonrpc":"2.0","id":3,"method":"tools/call","params":{"name":"corpus_info","arguments":{}}}"#,
        r#"{"jsonrpc":"2.0","id":4,"method":"tools/call","params":{"name":"cqp_query","arguments":{"query":"[word=\"so\"%c] [pos=\"JJ.*\"]"}}}"#,
        r#"{"jsonrpc":"2.0","id":5,"method":"tools/call","params":{"name":"cqp_query","arguments":{"query":"[word=\"so\""}}}"#,
        r#"this is not json"#,
        r#"{"jsonrpc":"2.0","id":7,"method":"resources/list"}"#,
    ]
    .join("\n");

    let lines = run_session(&index, &input, &log_path);
    // The notification gets no response; seven answerable lines remain.
    assert_eq!(lines.len(), 7);

    let init = parse(&lines[0]);
    assert_eq!(init["id"], 1);
    assert_eq!(init["result"]["protocolVersion"], "2025-03-26");
    assert_eq!(init["result"]["serverInfo"]["name"], "corq-server");
    assert!(init["result"]["capabilities"]["tools"].is_object());

    let list = parse(&lines[1]);
    let tools = list["result"]["tools"].as_array().unwrap();
    let names: Vec<&str> = tools.iter().map(|t| t["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["corpus_info", "cqp_query", "cqp_frequency"]);

    let info = parse(&lines[2]);
    let text = info["result"]["content"][0]["text"].as_str().unwrap();
    let payload: Value = serde_json::from_str(text).unwrap();
    assert_eq!(payload["token_count"], 5);

    let query = parse(&lines[3]);
    let text = query["result"]["content"][0]["text"].as_str().unwrap();
    let payload: Value = serde_json::from_str(text).unwrap();
    assert_eq!(payload["total_hits"], 2);

    let bad_query = parse(&lines[4]);
    assert_eq!(bad_query["error"]["code"], -32000);
    let message = bad_query["error"]["message"].as_str().unwrap();
    assert!(
        message.contains("at ") || message.contains("end of query"),
        "parser message should locate the problem: {message}"
    );

    let parse_err = parse(&lines[5]);
    assert_eq!(parse_err["error"]["code"], -32700);
    assert_eq!(parse_err["id"], Value::Null);

    let unknown = parse(&lines[6]);
    assert_eq!(unknown["error"]["code"], -32601);
    assert_eq!(unknown["id"], 7);

    // Three tools/call requests (including the failing one) were audited.
    let records = read_log(BufReader::new(File::open(&log_path).unwrap())).unwrap();
    assert_eq!(records.len(), 3);
    assert_eq!(records.iter().map(|r| r.seq).collect::<Vec<_>>(), [1, 2, 3]);
    assert!(records.iter().all(|r| r.corpus_digest == index.build_digest()));

    // The log replays cleanly against the same index.
    let report = replay_verify(&index, BufReader::new(File::open(&log_path).unwrap())).unwrap();
    assert_eq!(report.records, 3);
    assert!(report.is_clean());
}

#[test]
fn responses_are_byte_identical_across_sessions() {
    let index = fixture();
    let dir = tempfile::tempdir().unwrap();
    let input = [
        r#"{"jsonrpc":"2.0","id":1,"method":"initialize","params":{}}"#,
        r#"{"jsonrpc":"2.0","id":2,"method":"tools/call","params":{"name":"cqp_frequency","arguments":{"query":"[]","group_by":"match text_category"}}}"#,
    ]
    .join("\n");
    let first = run_session(&index, &input, &dir.path().join("a.jsonl"));
    let second = run_session(&index, &input, &dir.path().join("b.jsonl"));
    assert_eq!(first, second);

    // Identical calls also produce identical result digests in the logs.
    let log_a = read_log(BufReader::new(File::open(dir.path().join("a.jsonl")).unwrap())).unwrap();
    let log_b = read_log(BufReader::new(File::open(dir.path().join("b.jsonl")).unwrap())).unwrap();
    assert_eq!(log_a[0].result_digest, log_b[0].result_digest);
}

#[test]
fn replay_flags_tampered_records() {
    let index = fixture();
    let dir = tempfile::tempdir().unwrap();
    let log_path = dir.path().join("audit.jsonl");
    let input = [
        r#"{"jsonrpc":"2.0","id":1,"method":"tools/call","params":{"name":"cqp_query","arguments":{"query":"[word=\"so\"]"}}}"#,
        r#"{"jsonrpc":"2.0","id":2,"method":"tools/call","params":{"name":"cqp_query","arguments":{"query":"[word=\"bad\"]"}}}"#,
    ]
    .join("\n");
    run_session(&index, &input, &log_path);

    // Flip one character inside the second record's logged params.
    let content = std::fs::read_to_string(&log_path).unwrap();
    let tampered = content.replacen("\\\"bad\\\"", "\\\"sad\\\"", 1);
    assert_ne!(content, tampered, "tamper target not found in log");

    let report = replay_verify(&index, tampered.as_bytes()).unwrap();
    assert_eq!(report.records, 2);
    assert_eq!(report.mismatches, vec![2]);
}

#[test]
fn replay_refuses_a_foreign_corpus() {
    let index = fixture();
    let dir = tempfile::tempdir().unwrap();
    let log_path = dir.path().join("audit.jsonl");
    run_session(
        &index,
        r#"{"jsonrpc":"2.0","id":1,"method":"tools/call","params":{"name":"corpus_info","arguments":{}}}"#,
        &log_path,
    );

    let other_vrt = "<text id=\"x\">\n<s>\na\ta\tNN\tNN\tdep\t0\n</s>\n</text>\n";
    let other = build_index(other_vrt.as_bytes(), "other").unwrap();
    let err = replay_verify(&other, BufReader::new(File::open(&log_path).unwrap())).unwrap_err();
    assert!(matches!(err, ServerError::CorpusDigestMismatch { .. }));
}

#[test]
fn replay_accepts_a_reingested_identical_corpus() {
    let index = fixture();
    let dir = tempfile::tempdir().unwrap();
    let log_path = dir.path().join("audit.jsonl");
    run_session(
        &index,
        r#"{"jsonrpc":"2.0","id":1,"method":"tools/call","params":{"name":"cqp_frequency","arguments":{"query":"[pos=\"JJ\"]","count_by":"word"}}}"#,
        &log_path,
    );

    // A fresh ingest of the same source has the same build digest.
    let reingested = fixture();
    let report =
        replay_verify(&reingested, BufReader::new(File::open(&log_path).unwrap())).unwrap();
    assert!(report.is_clean());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Any input line yields a response (or silence for id-less lines),
    /// never a panic or loop exit.
    #[test]
    fn arbitrary_lines_never_crash_the_loop(lines in proptest::collection::vec(".{0,120}", 1..12)) {
        let index = fixture();
        let dir = tempfile::tempdir().unwrap();
        let mut log = AuditLog::open(&dir.path().join("fuzz.jsonl"), false).unwrap();
        let input = lines.join("\n");
        let mut output = Vec::new();
        serve(&index, input.as_bytes(), &mut output, &mut log).unwrap();
        // Every emitted line is itself valid JSON with a jsonrpc tag.
        for line in String::from_utf8(output).unwrap().lines() {
            let v: Value = serde_json::from_str(line).unwrap();
            prop_assert_eq!(&v["jsonrpc"], &json!("2.0"));
        }
    }

    /// Request/response id pairing holds for well-formed requests.
    #[test]
    fn ids_are_preserved(id in 0u64..1_000_000, method in "[a-z/]{1,12}") {
        let index = fixture();
        let dir = tempfile::tempdir().unwrap();
        let mut log = AuditLog::open(&dir.path().join("ids.jsonl"), false).unwrap();
        let request = json!({ "jsonrpc": "2.0", "id": id, "method": method });
        let mut output = Vec::new();
        serve(&index, serde_json::to_string(&request).unwrap().as_bytes(), &mut output, &mut log)
            .unwrap();
        let response: Value = serde_json::from_str(String::from_utf8(output).unwrap().trim()).unwrap();
        prop_assert_eq!(&response["id"], &json!(id));
    }
}
