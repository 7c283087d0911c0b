//! The three corpus tools and their argument handling.
//!
//! Tool calls arrive as JSON argument objects. Argument validation is
//! strict: unknown keys, wrong types, and missing required fields are
//! invalid-params errors, while query-language and engine failures are
//! execution errors carrying the underlying positioned message.

use std::collections::BTreeMap;
use std::str::FromStr;

use corq_corpus::{Attr, CorpusIndex, Layer, Period};
use corq_cqp::{parse_group_by, parse_metadata_filter, parse_query};
use corq_engine::{concordance, find_matches, frequency};
use serde_json::{json, Map, Value};

use crate::canon::digest_json;

/// Hard ceiling on page sizes so responses stay line-transport friendly.
pub const MAX_RESULTS_CAP: u64 = 1000;

const DEFAULT_QUERY_PAGE: u64 = 20;
const DEFAULT_FREQ_PAGE: u64 = 50;
const DEFAULT_CONTEXT_WIDTH: u64 = 8;

/// Inventory threshold: attribute value lists longer than this are
/// summarized as a distinct-value count.
const VALUE_LIST_LIMIT: usize = 100;

const SYNTAX_CHEAT_SHEET: &str = "\
Queries are sequences of token patterns matched against consecutive tokens.\n\
  [word=\"so\"]                 one token; the value regex must match the whole value\n\
  [word=\"so\"%c]               case-insensitive match\n\
  [pos=\"JJ.*\"]                regex over any attribute\n\
  [word=\"so\" & pos=\"RB\"]     conjunction; | is disjunction, ! negation, (...) grouping\n\
  [word!=\"so\"]                negated test\n\
  []                          any token\n\
  \"so\"%c                      shorthand for [word=\"so\"%c]\n\
Positional attributes: word, lemma, pos, pos_fine, deprel, head.\n\
Metadata filters (conjunctions of match.<attr>=\"value\" / !=):\n\
  text layer: author, text_category, year, period; s layer: clause_type, sentiment, subjectivity.\n\
group_by takes the form \"match <structural-attribute>\", e.g. \"match text_category\".\n\
Not supported: quantifiers (? * + {n}), within/containing, global constraints (::), the %d flag.";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ToolErrorKind {
    /// Malformed argument object: wrong shape, not wrong content.
    InvalidParams,
    /// The tool ran and rejected its input (parse errors, engine errors).
    Execution,
}

#[derive(Debug, Clone)]
pub struct ToolCallError {
    pub kind: ToolErrorKind,
    pub message: String,
}

impl ToolCallError {
    fn invalid(message: impl Into<String>) -> ToolCallError {
        ToolCallError { kind: ToolErrorKind::InvalidParams, message: message.into() }
    }

    fn execution(message: impl std::fmt::Display) -> ToolCallError {
        ToolCallError { kind: ToolErrorKind::Execution, message: message.to_string() }
    }
}

/// Digest of a tool outcome as recorded in the audit log: the canonical
/// result on success, an `{"error": message}` document on failure. Replay
/// must reproduce this byte for byte, so both serve and replay call this.
pub fn outcome_digest(outcome: &Result<Value, ToolCallError>) -> String {
    match outcome {
        Ok(result) => digest_json(result),
        Err(e) => digest_json(&json!({ "error": e.message })),
    }
}

/// Executes tool calls against one immutable index.
pub struct ToolHost<'a> {
    index: &'a CorpusIndex,
}

impl<'a> ToolHost<'a> {
    pub fn new(index: &'a CorpusIndex) -> ToolHost<'a> {
        ToolHost { index }
    }

    pub fn index(&self) -> &CorpusIndex {
        self.index
    }

    /// The fixed tool inventory, in registration order.
    pub fn descriptors() -> Vec<Value> {
        vec![
            json!({
                "name": "corpus_info",
                "description": "Describe the served corpus: size, positional attributes, \
                                structural layers with their attribute values, period inventory, \
                                and a query syntax cheat-sheet.",
                "inputSchema": {
                    "type": "object",
                    "properties": {},
                    "additionalProperties": false
                }
            }),
            json!({
                "name": "cqp_query",
                "description": "Run a CQP token-pattern query and return concordance lines in \
                                keyword-in-context format. Supports offset paging.",
                "inputSchema": {
                    "type": "object",
                    "properties": {
                        "query": {
                            "type": "string",
                            "description": "CQP pattern sequence, e.g. [word=\"so\"%c] [pos=\"JJ.*\"]"
                        },
                        "metadata_filter": {
                            "type": "string",
                            "description": "Conjunction of match.<attr>=\"value\" constraints"
                        },
                        "max_results": { "type": "integer", "minimum": 0, "maximum": 1000 },
                        "offset": { "type": "integer", "minimum": 0 },
                        "context_width": {
                            "type": "integer",
                            "minimum": 0,
                            "description": "Tokens of context on each side of the match"
                        }
                    },
                    "required": ["query"],
                    "additionalProperties": false
                }
            }),
            json!({
                "name": "cqp_frequency",
                "description": "Run a CQP query and tabulate match frequencies, optionally \
                                counting an attribute's values and grouping by a structural \
                                attribute. Group token totals are included for normalization.",
                "inputSchema": {
                    "type": "object",
                    "properties": {
                        "query": { "type": "string" },
                        "metadata_filter": { "type": "string" },
                        "count_by": {
                            "type": "string",
                            "enum": ["word", "lemma", "pos", "pos_fine", "deprel", "head"]
                        },
                        "count_token": {
                            "type": "integer",
                            "minimum": 0,
                            "description": "Count only this zero-based token of each match"
                        },
                        "group_by": {
                            "type": "string",
                            "description": "Form: match <structural-attribute>"
                        },
                        "max_results": { "type": "integer", "minimum": 0, "maximum": 1000 }
                    },
                    "required": ["query"],
                    "additionalProperties": false
                }
            }),
        ]
    }

    /// Dispatches one tool call. The caller owns auditing and transport.
    pub fn call(&self, tool: &str, arguments: &Value) -> Result<Value, ToolCallError> {
        let empty = Map::new();
        let args = match arguments {
            Value::Object(map) => map,
            Value::Null => &empty,
            _ => return Err(ToolCallError::invalid("tool arguments must be an object")),
        };
        match tool {
            "corpus_info" => {
                check_keys(args, &[])?;
                Ok(self.corpus_info())
            }
            "cqp_query" => self.cqp_query(args),
            "cqp_frequency" => self.cqp_frequency(args),
            other => Err(ToolCallError::invalid(format!("unknown tool {other:?}"))),
        }
    }

    fn corpus_info(&self) -> Value {
        let mut layers = Map::new();
        for (layer, label) in [(Layer::Text, "text"), (Layer::S, "s")] {
            let mut attrs = Map::new();
            for name in self.index.layer_attr_names(layer) {
                let values = self.index.layer_attr_values(layer, name);
                let summary = if values.len() <= VALUE_LIST_LIMIT {
                    json!({ "values": values.iter().collect::<Vec<_>>() })
                } else {
                    json!({ "distinct_values": values.len() })
                };
                attrs.insert(name.to_string(), summary);
            }
            layers.insert(label.to_string(), Value::Object(attrs));
        }
        json!({
            "name": self.index.name(),
            "token_count": self.index.token_count(),
            "build_digest": self.index.build_digest(),
            "positional_attributes": Attr::ALL.iter().map(|a| a.as_str()).collect::<Vec<_>>(),
            "structural_layers": layers,
            "periods": Period::ALL.iter().map(|p| p.as_str()).collect::<Vec<_>>(),
            "syntax": SYNTAX_CHEAT_SHEET,
        })
    }

    fn cqp_query(&self, args: &Map<String, Value>) -> Result<Value, ToolCallError> {
        check_keys(args, &["query", "metadata_filter", "max_results", "offset", "context_width"])?;
        let query_text = require_str(args, "query")?;
        let filter_text = optional_str(args, "metadata_filter")?.unwrap_or("");
        let max_results =
            optional_u64(args, "max_results")?.unwrap_or(DEFAULT_QUERY_PAGE).min(MAX_RESULTS_CAP);
        let offset = optional_u64(args, "offset")?.unwrap_or(0);
        let context_width =
            optional_u64(args, "context_width")?.unwrap_or(DEFAULT_CONTEXT_WIDTH);

        let query = parse_query(query_text).map_err(ToolCallError::execution)?;
        let filter = parse_metadata_filter(filter_text).map_err(ToolCallError::execution)?;
        let spans = find_matches(self.index, &query, &filter).map_err(ToolCallError::execution)?;

        let lines = concordance(
            self.index,
            &spans,
            context_width as usize,
            offset as usize,
            max_results as usize,
        );
        let returned = lines.len() as u64;
        let total_hits = spans.len() as u64;
        let rendered: Vec<Value> = lines
            .into_iter()
            .map(|line| {
                json!({
                    "position": line.position,
                    "left": line.left,
                    "keyword": line.keyword,
                    "right": line.right,
                    "meta": line.meta,
                })
            })
            .collect();
        Ok(json!({
            "total_hits": total_hits,
            "offset": offset,
            "returned": returned,
            "truncated": offset + returned < total_hits,
            "lines": rendered,
        }))
    }

    fn cqp_frequency(&self, args: &Map<String, Value>) -> Result<Value, ToolCallError> {
        check_keys(
            args,
            &["query", "metadata_filter", "count_by", "count_token", "group_by", "max_results"],
        )?;
        let query_text = require_str(args, "query")?;
        let filter_text = optional_str(args, "metadata_filter")?.unwrap_or("");
        let max_results =
            optional_u64(args, "max_results")?.unwrap_or(DEFAULT_FREQ_PAGE).min(MAX_RESULTS_CAP);
        let count_by = optional_str(args, "count_by")?
            .map(|name| {
                Attr::from_str(name).map_err(|_| {
                    ToolCallError::execution(format!(
                        "count_by must name a positional attribute (word, lemma, pos, pos_fine, \
                         deprel, head), got {name:?}"
                    ))
                })
            })
            .transpose()?;
        let count_token = optional_u64(args, "count_token")?.map(|v| v as usize);
        let group_by = optional_str(args, "group_by")?
            .map(|spec| parse_group_by(spec).map_err(ToolCallError::execution))
            .transpose()?;

        let query = parse_query(query_text).map_err(ToolCallError::execution)?;
        let filter = parse_metadata_filter(filter_text).map_err(ToolCallError::execution)?;
        let spans = find_matches(self.index, &query, &filter).map_err(ToolCallError::execution)?;
        let table = frequency(self.index, &spans, count_by, count_token, group_by.as_deref())
            .map_err(ToolCallError::execution)?;

        // Per-group hit sums over the full table, computed before paging so
        // callers can normalize even when rows are cut off.
        let mut group_hit_totals: BTreeMap<&str, u64> = BTreeMap::new();
        for row in &table.rows {
            *group_hit_totals.entry(row.group.as_str()).or_insert(0) += row.count;
        }
        let truncated = table.rows.len() as u64 > max_results;
        let rows: Vec<Value> = table
            .rows
            .iter()
            .take(max_results as usize)
            .map(|row| json!({ "group": row.group, "counted": row.counted, "count": row.count }))
            .collect();
        Ok(json!({
            "total_hits": table.total_hits,
            "rows": rows,
            "group_token_totals": table.group_token_totals,
            "group_hit_totals": group_hit_totals,
            "truncated": truncated,
        }))
    }
}

fn check_keys(args: &Map<String, Value>, allowed: &[&str]) -> Result<(), ToolCallError> {
    for key in args.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(ToolCallError::invalid(format!("unknown argument {key:?}")));
        }
    }
    Ok(())
}

fn require_str<'m>(args: &'m Map<String, Value>, key: &str) -> Result<&'m str, ToolCallError> {
    optional_str(args, key)?
        .ok_or_else(|| ToolCallError::invalid(format!("missing required argument {key:?}")))
}

fn optional_str<'m>(
    args: &'m Map<String, Value>,
    key: &str,
) -> Result<Option<&'m str>, ToolCallError> {
    match args.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) => Ok(Some(s)),
        Some(_) => Err(ToolCallError::invalid(format!("argument {key:?} must be a string"))),
    }
}

fn optional_u64(args: &Map<String, Value>, key: &str) -> Result<Option<u64>, ToolCallError> {
    match args.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::Number(n)) => n
            .as_u64()
            .map(Some)
            .ok_or_else(|| {
                ToolCallError::invalid(format!("argument {key:?} must be a non-negative integer"))
            }),
        Some(_) => {
            Err(ToolCallError::invalid(format!("argument {key:?} must be a non-negative integer")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use corq_corpus::vrt::build_index;

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

    #[test]
    fn exactly_three_descriptors_in_fixed_order() {
        let descriptors = ToolHost::descriptors();
        let names: Vec<&str> =
            descriptors.iter().map(|d| d["name"].as_str().unwrap()).collect();
        assert_eq!(names, ["corpus_info", "cqp_query", "cqp_frequency"]);
        for d in &descriptors {
            assert!(d["inputSchema"]["type"] == "object");
            assert!(d["description"].as_str().unwrap().len() > 20);
        }
    }

    #[test]
    fn corpus_info_reports_inventories() {
        let index = fixture();
        let host = ToolHost::new(&index);
        let info = host.call("corpus_info", &Value::Null).unwrap();
        assert_eq!(info["token_count"], 5);
        assert_eq!(info["name"], "mini");
        assert_eq!(info["build_digest"].as_str().unwrap().len(), 64);
        assert_eq!(
            info["structural_layers"]["text"]["text_category"]["values"],
            json!(["Drama", "Poetry"])
        );
        // Year 1820 produced a derived period attribute.
        assert_eq!(
            info["structural_layers"]["text"]["period"]["values"],
            json!(["early_19c"])
        );
        assert_eq!(info["periods"].as_array().unwrap().len(), 8);
        assert!(info["syntax"].as_str().unwrap().contains("group_by"));
    }

    #[test]
    fn query_tool_pages_and_reports_truncation() {
        let index = fixture();
        let host = ToolHost::new(&index);
        let result = host
            .call("cqp_query", &json!({ "query": "[]", "max_results": 3 }))
            .unwrap();
        assert_eq!(result["total_hits"], 5);
        assert_eq!(result["returned"], 3);
        assert_eq!(result["truncated"], true);

        let rest = host
            .call("cqp_query", &json!({ "query": "[]", "max_results": 3, "offset": 3 }))
            .unwrap();
        assert_eq!(rest["returned"], 2);
        assert_eq!(rest["truncated"], false);
    }

    #[test]
    fn query_tool_returns_kwic_lines_with_metadata() {
        let index = fixture();
        let host = ToolHost::new(&index);
        let result = host
            .call("cqp_query", &json!({ "query": "[word=\"so\"%c] [pos=\"JJ.*\"]" }))
            .unwrap();
        assert_eq!(result["total_hits"], 2);
        let first = &result["lines"][0];
        assert_eq!(first["keyword"], json!(["so", "good"]));
        assert_eq!(first["meta"]["text_category"], "Poetry");

        let filtered = host
            .call(
                "cqp_query",
                &json!({
                    "query": "[word=\"so\"%c] [pos=\"JJ.*\"]",
                    "metadata_filter": "match.text_category=\"Poetry\"",
                }),
            )
            .unwrap();
        assert_eq!(filtered["total_hits"], 1);
    }

    #[test]
    fn frequency_tool_tabulates_and_totals() {
        let index = fixture();
        let host = ToolHost::new(&index);
        let result = host
            .call(
                "cqp_frequency",
                &json!({
                    "query": "[word=\"so\"]",
                    "group_by": "match text_category",
                }),
            )
            .unwrap();
        assert_eq!(result["total_hits"], 2);
        assert_eq!(result["group_token_totals"], json!({ "Drama": 2, "Poetry": 3 }));
        assert_eq!(result["group_hit_totals"], json!({ "Drama": 1, "Poetry": 1 }));
        assert_eq!(result["truncated"], false);
    }

    #[test]
    fn argument_validation_is_strict() {
        let index = fixture();
        let host = ToolHost::new(&index);

        let unknown_key = host.call("cqp_query", &json!({ "query": "[]", "bogus": 1 }));
        let err = unknown_key.unwrap_err();
        assert_eq!(err.kind, ToolErrorKind::InvalidParams);
        assert!(err.message.contains("bogus"));

        let missing = host.call("cqp_query", &json!({})).unwrap_err();
        assert_eq!(missing.kind, ToolErrorKind::InvalidParams);

        let wrong_type = host.call("cqp_query", &json!({ "query": 7 })).unwrap_err();
        assert_eq!(wrong_type.kind, ToolErrorKind::InvalidParams);

        let unknown_tool = host.call("nope", &json!({})).unwrap_err();
        assert_eq!(unknown_tool.kind, ToolErrorKind::InvalidParams);

        let extra_info_arg = host.call("corpus_info", &json!({ "x": 1 })).unwrap_err();
        assert_eq!(extra_info_arg.kind, ToolErrorKind::InvalidParams);
    }

    #[test]
    fn execution_errors_carry_positioned_messages() {
        let index = fixture();
        let host = ToolHost::new(&index);
        let err = host.call("cqp_query", &json!({ "query": "[word=\"so\"" })).unwrap_err();
        assert_eq!(err.kind, ToolErrorKind::Execution);
        assert!(
            err.message.contains("at ") || err.message.contains("end of query"),
            "message should locate the problem: {}",
            err.message
        );

        let bad_group = host
            .call("cqp_frequency", &json!({ "query": "[]", "group_by": "text_category" }))
            .unwrap_err();
        assert_eq!(bad_group.kind, ToolErrorKind::Execution);
        assert!(bad_group.message.contains("match "), "got: {}", bad_group.message);
    }

    #[test]
    fn page_caps_are_enforced() {
        let index = fixture();
        let host = ToolHost::new(&index);
        let result = host
            .call("cqp_query", &json!({ "query": "[]", "max_results": 2_000_000 }))
            .unwrap();
        // Five hits fit comfortably; the cap only clamps the page size.
        assert_eq!(result["returned"], 5);
        let err = host
            .call("cqp_query", &json!({ "query": "[]", "max_results": -3 }))
            .unwrap_err();
        assert_eq!(err.kind, ToolErrorKind::InvalidParams);
    }

    #[test]
    fn outcome_digests_distinguish_success_and_failure() {
        let ok: Result<Value, ToolCallError> = Ok(json!({ "a": 1 }));
        let err: Result<Value, ToolCallError> =
            Err(ToolCallError::execution("syntax error at char 3"));
        assert_ne!(outcome_digest(&ok), outcome_digest(&err));
        assert_eq!(outcome_digest(&ok), outcome_digest(&Ok(json!({ "a": 1 }))));
    }
}
