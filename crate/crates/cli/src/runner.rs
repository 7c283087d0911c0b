//! Executes a parsed script against an in-process tool host and renders a
//! deterministic CommonMark report.
//!
//! Determinism contract: given the same index and script, every byte of the
//! report is identical across runs except the single `_Generated: ..._`
//! line. Tool results are digested with the same canonical form the serve
//! loop audits, so report digests line up with audit logs.

use anyhow::{anyhow, bail, Context, Result};
use corq_corpus::{CorpusIndex, Period};
use corq_cqp::{parse_query, MetadataFilter};
use corq_server::{canonical_json, digest_json, ToolHost};
use corq_stats::{
    collocate_profile, diachronic_table, log_likelihood_g2, normalize_pmw,
    pooled_period_comparison, agreement_report, DiachronicTable, PeriodKey, PolarityLexicon,
};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::script::{
    Assertion, Cmp, ComputeKind, Expr, Operand, RefPath, Script, Step, Tolerance,
};

#[derive(Debug)]
pub struct RunOutcome {
    pub report: String,
    pub asserts_total: usize,
    pub asserts_failed: usize,
}

struct Runner<'a> {
    host: ToolHost<'a>,
    lexicon: &'a PolarityLexicon,
    bindings: BTreeMap<String, Value>,
    /// Diachronic tables keep their native form alongside the JSON binding
    /// because pooled comparisons need the typed period keys back.
    tables: BTreeMap<String, DiachronicTable>,
    report: String,
    step_no: usize,
    asserts_total: usize,
    asserts_failed: usize,
}

pub fn run_script(
    index: &CorpusIndex,
    script: &Script,
    lexicon: &PolarityLexicon,
    timestamp: &str,
) -> Result<RunOutcome> {
    let mut runner = Runner {
        host: ToolHost::new(index),
        lexicon,
        bindings: BTreeMap::new(),
        tables: BTreeMap::new(),
        report: String::new(),
        step_no: 0,
        asserts_total: 0,
        asserts_failed: 0,
    };

    let r = &mut runner.report;
    writeln!(r, "# script: {}", script.name)?;
    writeln!(r)?;
    writeln!(r, "_Generated: {timestamp}_")?;
    writeln!(r)?;
    writeln!(r, "Corpus: `{}` (digest `{}`)", index.name(), index.build_digest())?;
    writeln!(r)?;

    for step in &script.steps {
        runner.step(step)?;
    }

    let status = if runner.asserts_failed == 0 { "PASS" } else { "FAIL" };
    let r = &mut runner.report;
    writeln!(r, "## Summary")?;
    writeln!(r)?;
    writeln!(
        r,
        "Status: **{status}** ({} of {} assertions passed)",
        runner.asserts_total - runner.asserts_failed,
        runner.asserts_total
    )?;

    Ok(RunOutcome {
        report: runner.report,
        asserts_total: runner.asserts_total,
        asserts_failed: runner.asserts_failed,
    })
}

impl Runner<'_> {
    fn step(&mut self, step: &Step) -> Result<()> {
        self.step_no += 1;
        let n = self.step_no;
        match step {
            Step::Call { name, tool, params } => self
                .run_call(n, name, tool, params)
                .with_context(|| format!("step {n}: call {name} = {tool}")),
            Step::Compute { name, kind, inputs } => self
                .run_compute(n, name, *kind, inputs)
                .with_context(|| format!("step {n}: compute {name} = {}", kind.as_str())),
            Step::Assert(assertion) => self
                .run_assert(n, assertion)
                .with_context(|| format!("step {n}: {}", assertion.source)),
            Step::Table { name, caption } => self
                .run_table(n, name, caption)
                .with_context(|| format!("step {n}: table {name}")),
        }
    }

    fn run_call(&mut self, n: usize, name: &str, tool: &str, params: &Value) -> Result<()> {
        let params = self.resolve(params)?;
        let result = self
            .host
            .call(tool, &params)
            .map_err(|e| anyhow!("{tool} failed: {}", e.message))?;
        let digest = digest_json(&result);

        let r = &mut self.report;
        writeln!(r, "## {n}. call {name} = {tool}")?;
        writeln!(r)?;
        writeln!(r, "```json")?;
        writeln!(r, "{}", canonical_json(&params))?;
        writeln!(r, "```")?;
        writeln!(r)?;
        writeln!(r, "Result digest: `{digest}`")?;
        // Full call payloads can run to thousands of lines of concordance;
        // the report keeps the headline numbers and the digest.
        let mut headlines = Vec::new();
        for key in ["total_hits", "token_count", "truncated"] {
            if let Some(v) = result.get(key) {
                headlines.push(format!("{key} {v}"));
            }
        }
        if !headlines.is_empty() {
            writeln!(r, "({})", headlines.join(", "))?;
        }
        writeln!(r)?;

        self.bindings.insert(name.to_string(), result);
        Ok(())
    }

    fn run_compute(&mut self, n: usize, name: &str, kind: ComputeKind, inputs: &Value) -> Result<()> {
        let inputs = self.resolve(inputs)?;
        let value = match kind {
            ComputeKind::Pmw => {
                let hits = self.number_field(&inputs, "hits")? as u64;
                let tokens = self.number_field(&inputs, "tokens")? as u64;
                let pmw = normalize_pmw(hits, tokens)?;
                json!({ "hits": hits, "tokens": tokens, "pmw": pmw })
            }
            ComputeKind::G2 => {
                let result = log_likelihood_g2(
                    self.number_field(&inputs, "hits_a")? as u64,
                    self.number_field(&inputs, "tokens_a")? as u64,
                    self.number_field(&inputs, "hits_b")? as u64,
                    self.number_field(&inputs, "tokens_b")? as u64,
                )?;
                serde_json::to_value(&result)?
            }
            ComputeKind::PooledComparison => self.compute_pooled(&inputs)?,
            ComputeKind::CollocateProfile => {
                let counts = self.collocate_counts(&inputs)?;
                let profile = collocate_profile(&counts, self.lexicon)?;
                serde_json::to_value(&profile)?
            }
            ComputeKind::DiachronicTable => {
                let table = self.compute_diachronic(&inputs)?;
                let value = serde_json::to_value(&table)?;
                self.tables.insert(name.to_string(), table);
                value
            }
            ComputeKind::Kappa => {
                let a = string_array(&inputs, "a")?;
                let b = string_array(&inputs, "b")?;
                let report = agreement_report(&a, &b)?;
                serde_json::to_value(&report)?
            }
        };

        let r = &mut self.report;
        writeln!(r, "## {n}. compute {name} = {}", kind.as_str())?;
        writeln!(r)?;
        writeln!(r, "```json")?;
        writeln!(r, "{}", canonical_json(&inputs))?;
        writeln!(r, "```")?;
        writeln!(r)?;
        writeln!(r, "Result:")?;
        writeln!(r)?;
        writeln!(r, "```json")?;
        writeln!(r, "{}", canonical_json(&value))?;
        writeln!(r, "```")?;
        writeln!(r)?;

        self.bindings.insert(name.to_string(), value);
        Ok(())
    }

    fn compute_pooled(&self, inputs: &Value) -> Result<Value> {
        let table_name = inputs
            .get("table")
            .and_then(Value::as_str)
            .ok_or_else(|| anyhow!("pooled_comparison needs \"table\": \"<diachronic binding>\""))?;
        let table = self
            .tables
            .get(table_name)
            .ok_or_else(|| anyhow!("{table_name:?} is not a diachronic_table binding"))?;
        let label = inputs
            .get("label")
            .and_then(Value::as_str)
            .ok_or_else(|| anyhow!("pooled_comparison needs \"label\""))?;
        let early = period_array(inputs, "early")?;
        let late = period_array(inputs, "late")?;
        let result = pooled_period_comparison(table, label, &early, &late)?;
        Ok(serde_json::to_value(&result)?)
    }

    fn compute_diachronic(&self, inputs: &Value) -> Result<DiachronicTable> {
        let specs = inputs
            .get("queries")
            .and_then(Value::as_array)
            .ok_or_else(|| anyhow!("diachronic_table needs \"queries\": [{{label, query}}]"))?;
        let mut queries = Vec::new();
        for spec in specs {
            let label = spec
                .get("label")
                .and_then(Value::as_str)
                .ok_or_else(|| anyhow!("each query needs a \"label\""))?;
            let source = spec
                .get("query")
                .and_then(Value::as_str)
                .ok_or_else(|| anyhow!("each query needs a \"query\""))?;
            let ast = parse_query(source).map_err(|e| anyhow!("query {label:?}: {e}"))?;
            queries.push((label.to_string(), ast));
        }
        let filter = match inputs.get("filter").and_then(Value::as_str) {
            Some(text) => corq_cqp::parse_metadata_filter(text)
                .map_err(|e| anyhow!("metadata filter: {e}"))?,
            None => MetadataFilter::empty(),
        };
        Ok(diachronic_table(self.host.index(), &queries, &filter)?)
    }

    /// Collocate counts come either inline (`"counts": {lemma: n}`) or from
    /// a frequency result (`"from_rows": REF`) summing counts per counted
    /// form.
    fn collocate_counts(&self, inputs: &Value) -> Result<BTreeMap<String, u64>> {
        if let Some(counts) = inputs.get("counts") {
            let map = counts
                .as_object()
                .ok_or_else(|| anyhow!("\"counts\" must be an object of lemma: count"))?;
            let mut out = BTreeMap::new();
            for (lemma, count) in map {
                let count = count
                    .as_u64()
                    .ok_or_else(|| anyhow!("count for {lemma:?} must be a non-negative integer"))?;
                out.insert(lemma.clone(), count);
            }
            return Ok(out);
        }
        if let Some(rows) = inputs.get("from_rows") {
            let rows = rows
                .as_array()
                .ok_or_else(|| anyhow!("\"from_rows\" must resolve to an array of rows"))?;
            let mut out: BTreeMap<String, u64> = BTreeMap::new();
            for row in rows {
                let counted = row
                    .get("counted")
                    .and_then(Value::as_str)
                    .ok_or_else(|| anyhow!("rows need a string \"counted\" field"))?;
                let count = row
                    .get("count")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| anyhow!("rows need an integer \"count\" field"))?;
                *out.entry(counted.to_string()).or_insert(0) += count;
            }
            return Ok(out);
        }
        bail!("collocate_profile needs \"counts\" or \"from_rows\"");
    }

    fn run_assert(&mut self, n: usize, assertion: &Assertion) -> Result<()> {
        self.asserts_total += 1;
        let lhs = self.eval_expr(&assertion.lhs)?;
        let rhs = self.eval_expr(&assertion.rhs)?;
        let pass = compare(lhs, rhs, assertion.cmp, assertion.tolerance);
        if !pass {
            self.asserts_failed += 1;
        }
        let verdict = if pass { "PASS" } else { "FAIL" };
        let r = &mut self.report;
        writeln!(r, "## {n}. assert")?;
        writeln!(r)?;
        writeln!(r, "`{}`", assertion.source)?;
        writeln!(r)?;
        writeln!(r, "**{verdict}** (left {lhs}, right {rhs})")?;
        writeln!(r)?;
        Ok(())
    }

    fn run_table(&mut self, n: usize, name: &str, caption: &str) -> Result<()> {
        let rendered = if let Some(table) = self.tables.get(name) {
            render_diachronic_markdown(table)
        } else {
            let value = self
                .bindings
                .get(name)
                .ok_or_else(|| anyhow!("{name:?} is not bound"))?;
            if value.get("rows").and_then(Value::as_array).is_some() {
                render_freq_markdown(value)?
            } else {
                render_object_markdown(value)?
            }
        };
        let r = &mut self.report;
        writeln!(r, "## {n}. table: {caption}")?;
        writeln!(r)?;
        writeln!(r, "{rendered}")?;
        Ok(())
    }

    fn eval_expr(&self, expr: &Expr) -> Result<f64> {
        match expr {
            Expr::Operand(op) => self.eval_operand(op),
            Expr::Quotient(a, b) => {
                let denom = self.eval_operand(b)?;
                if denom == 0.0 {
                    bail!("division by zero in assertion");
                }
                Ok(self.eval_operand(a)? / denom)
            }
        }
    }

    fn eval_operand(&self, op: &Operand) -> Result<f64> {
        match op {
            Operand::Number(n) => Ok(*n),
            Operand::Path(path) => {
                let value = self.lookup_path(path)?;
                value
                    .as_f64()
                    .ok_or_else(|| anyhow!("{} is not numeric: {value}", display_path(path)))
            }
        }
    }

    fn lookup_path(&self, path: &RefPath) -> Result<Value> {
        let mut current = self
            .bindings
            .get(&path.name)
            .ok_or_else(|| anyhow!("{:?} is not bound", path.name))?;
        for segment in &path.segments {
            current = match current {
                Value::Object(map) => map
                    .get(segment)
                    .ok_or_else(|| anyhow!("no field {segment:?} in {}", display_path(path)))?,
                Value::Array(items) => {
                    let idx: usize = segment
                        .parse()
                        .map_err(|_| anyhow!("{segment:?} is not an array index"))?;
                    items
                        .get(idx)
                        .ok_or_else(|| anyhow!("index {idx} out of range in {}", display_path(path)))?
                }
                other => bail!("cannot descend into {other} at {segment:?}"),
            };
        }
        Ok(current.clone())
    }

    /// Replaces reference objects with the bound values they point at.
    /// `{"$": name}` splices the whole binding; `"path"` walks into it;
    /// `"row"`/`"field"` selects a field from the unique matching row.
    fn resolve(&self, value: &Value) -> Result<Value> {
        match value {
            Value::Object(map) if map.contains_key("$") => self.resolve_ref(map),
            Value::Object(map) => {
                let mut out = Map::new();
                for (k, v) in map {
                    out.insert(k.clone(), self.resolve(v)?);
                }
                Ok(Value::Object(out))
            }
            Value::Array(items) => {
                Ok(Value::Array(items.iter().map(|v| self.resolve(v)).collect::<Result<_>>()?))
            }
            other => Ok(other.clone()),
        }
    }

    fn resolve_ref(&self, map: &Map<String, Value>) -> Result<Value> {
        let name = map
            .get("$")
            .and_then(Value::as_str)
            .ok_or_else(|| anyhow!("reference {{\"$\": ...}} must name a string"))?;
        for key in map.keys() {
            if !matches!(key.as_str(), "$" | "path" | "row" | "field") {
                bail!("unknown reference key {key:?}");
            }
        }
        let mut current = self
            .bindings
            .get(name)
            .ok_or_else(|| anyhow!("{name:?} is not bound"))?
            .clone();
        if let Some(path) = map.get("path") {
            let segments = path
                .as_array()
                .ok_or_else(|| anyhow!("\"path\" must be an array of keys/indexes"))?;
            for segment in segments {
                current = match (&current, segment) {
                    (Value::Object(m), Value::String(key)) => m
                        .get(key)
                        .cloned()
                        .ok_or_else(|| anyhow!("no field {key:?} under {name:?}"))?,
                    (Value::Array(items), Value::Number(idx)) => {
                        let idx = idx
                            .as_u64()
                            .ok_or_else(|| anyhow!("array index must be a non-negative integer"))?;
                        items
                            .get(idx as usize)
                            .cloned()
                            .ok_or_else(|| anyhow!("index {idx} out of range under {name:?}"))?
                    }
                    (_, seg) => bail!("cannot apply path segment {seg} under {name:?}"),
                };
            }
        }
        if let Some(row_spec) = map.get("row") {
            let conditions = row_spec
                .as_object()
                .ok_or_else(|| anyhow!("\"row\" must be an object of field: value"))?;
            let rows = current
                .get("rows")
                .and_then(Value::as_array)
                .or_else(|| current.as_array())
                .ok_or_else(|| anyhow!("\"row\" selection needs an array of rows"))?;
            let matches: Vec<&Value> = rows
                .iter()
                .filter(|row| conditions.iter().all(|(k, v)| row.get(k) == Some(v)))
                .collect();
            let row = match matches.as_slice() {
                [row] => *row,
                [] => bail!("no row matches {}", canonical_json(row_spec)),
                _ => bail!("multiple rows match {}", canonical_json(row_spec)),
            };
            let field = map
                .get("field")
                .and_then(Value::as_str)
                .ok_or_else(|| anyhow!("\"row\" selection needs a \"field\""))?;
            current = row
                .get(field)
                .cloned()
                .ok_or_else(|| anyhow!("selected row has no field {field:?}"))?;
        } else if map.contains_key("field") {
            bail!("\"field\" is only valid together with \"row\"");
        }
        Ok(current)
    }

    fn number_field(&self, inputs: &Value, key: &str) -> Result<f64> {
        inputs
            .get(key)
            .and_then(Value::as_f64)
            .ok_or_else(|| anyhow!("input {key:?} must be a number"))
    }
}

fn compare(lhs: f64, rhs: f64, cmp: Cmp, tolerance: Option<Tolerance>) -> bool {
    let equal = match tolerance {
        None => lhs == rhs,
        Some(Tolerance::Abs(tol)) => (lhs - rhs).abs() <= tol,
        Some(Tolerance::Rel(tol)) => (lhs - rhs).abs() <= tol * rhs.abs(),
    };
    match cmp {
        Cmp::Eq => equal,
        Cmp::Ne => !equal,
        Cmp::Le => lhs <= rhs,
        Cmp::Ge => lhs >= rhs,
        Cmp::Lt => lhs < rhs,
        Cmp::Gt => lhs > rhs,
    }
}

fn display_path(path: &RefPath) -> String {
    let mut out = path.name.clone();
    for segment in &path.segments {
        out.push('.');
        out.push_str(segment);
    }
    out
}

fn string_array(inputs: &Value, key: &str) -> Result<Vec<String>> {
    let items = inputs
        .get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| anyhow!("input {key:?} must be an array of strings"))?;
    items
        .iter()
        .map(|v| {
            v.as_str()
                .map(str::to_string)
                .ok_or_else(|| anyhow!("input {key:?} must contain only strings"))
        })
        .collect()
}

fn period_array(inputs: &Value, key: &str) -> Result<Vec<Period>> {
    let labels = string_array(inputs, key)?;
    labels
        .iter()
        .map(|label| {
            label
                .parse::<Period>()
                .map_err(|_| anyhow!("unknown period label {label:?} in {key:?}"))
        })
        .collect()
}

/// Diachronic tables render one row per query with `pmw (hits)` cells, in
/// the shape diachronic relay studies usually print.
fn render_diachronic_markdown(table: &DiachronicTable) -> String {
    let periods: Vec<PeriodKey> = table.period_token_totals.keys().copied().collect();
    let mut out = String::new();
    out.push_str("| item |");
    for p in &periods {
        let _ = write!(out, " {p} |");
    }
    out.push_str("\n|---|");
    for _ in &periods {
        out.push_str("---:|");
    }
    out.push('\n');
    out.push_str("| tokens |");
    for p in &periods {
        let _ = write!(out, " {} |", table.period_token_totals[p]);
    }
    out.push('\n');
    for row in &table.rows {
        let _ = write!(out, "| {} |", row.label);
        for p in &periods {
            match row.cells.get(p) {
                Some(cell) => {
                    let _ = write!(out, " {:.0} ({}) |", cell.pmw, cell.hits);
                }
                None => out.push_str(" - |"),
            }
        }
        out.push('\n');
    }
    out
}

/// Frequency results render with a per-group pmw column when the result
/// carries group token totals.
fn render_freq_markdown(value: &Value) -> Result<String> {
    let rows = value.get("rows").and_then(Value::as_array).unwrap();
    let totals = value.get("group_token_totals").and_then(Value::as_object);
    let mut out = String::new();
    out.push_str("| group | counted | count | pmw |\n|---|---|---:|---:|\n");
    for row in rows {
        let group = row.get("group").and_then(Value::as_str).unwrap_or("?");
        let counted = row.get("counted").and_then(Value::as_str).unwrap_or("?");
        let count = row.get("count").and_then(Value::as_u64).unwrap_or(0);
        let pmw = totals
            .and_then(|t| t.get(group))
            .and_then(Value::as_u64)
            .filter(|tokens| *tokens > 0)
            .map(|tokens| format!("{:.1}", count as f64 / tokens as f64 * 1_000_000.0))
            .unwrap_or_else(|| "-".to_string());
        let _ = writeln!(out, "| {group} | {counted} | {count} | {pmw} |");
    }
    Ok(out)
}

fn render_object_markdown(value: &Value) -> Result<String> {
    let map = value
        .as_object()
        .ok_or_else(|| anyhow!("only objects and row sets can be rendered as tables"))?;
    let mut out = String::new();
    out.push_str("| field | value |\n|---|---|\n");
    for (key, v) in map {
        let rendered = match v {
            Value::String(s) => s.clone(),
            other => canonical_json(other),
        };
        let _ = writeln!(out, "| {key} | {rendered} |");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::script::parse_script;
    use corq_corpus::vrt::build_index;

    fn fixture_index() -> CorpusIndex {
        let vrt = concat!(
            "<text id=\"a\" text_category=\"Drama\" author=\"X\" year=\"1820\">\n",
            "<s>\n",
            "so\tso\tRB\tRB\tadvmod\t2\n",
            "good\tgood\tJJ\tJJ\tamod\t0\n",
            "stuff\tstuff\tNN\tNN\troot\t0\n",
            "</s>\n",
            "</text>\n",
            "<text id=\"b\" text_category=\"Poetry\" author=\"Y\" year=\"1960\">\n",
            "<s>\n",
            "so\tso\tRB\tRB\tadvmod\t2\n",
            "bad\tbad\tJJ\tJJ\tamod\t0\n",
            "</s>\n",
            "</text>\n",
        );
        build_index(vrt.as_bytes(), "fixture").unwrap()
    }

    fn run(source: &str) -> RunOutcome {
        let index = fixture_index();
        let script = parse_script(source).unwrap();
        let lexicon = PolarityLexicon::seed();
        run_script(&index, &script, &lexicon, "2026-01-01T00:00:00Z").unwrap()
    }

    #[test]
    fn call_compute_assert_and_table_round_trip() {
        let outcome = run(concat!(
            "script demo\n",
            "call info = corpus_info {}\n",
            "call hits = cqp_query {\"query\": \"[word=\\\"so\\\"] [pos=\\\"JJ.*\\\"]\"}\n",
            "compute rate = pmw {\"hits\": {\"$\": \"hits\", \"path\": [\"total_hits\"]}, \"tokens\": {\"$\": \"info\", \"path\": [\"token_count\"]}}\n",
            "assert rate.pmw == 400000 within abs=0.001\n",
            "assert rate.hits / rate.tokens == 0.4\n",
            "table rate \"Rate of so + adjective\"\n",
        ));
        assert_eq!(outcome.asserts_total, 2);
        assert_eq!(outcome.asserts_failed, 0);
        assert!(outcome.report.contains("**PASS** (left 400000, right 400000)"));
        assert!(outcome.report.contains("| pmw | 400000.0 |"));
        assert!(outcome.report.contains("Status: **PASS** (2 of 2 assertions passed)"));
    }

    #[test]
    fn failed_asserts_continue_and_mark_fail() {
        let outcome = run(concat!(
            "script demo\n",
            "call info = corpus_info {}\n",
            "assert info.token_count == 9999\n",
            "assert info.token_count == 5\n",
        ));
        assert_eq!(outcome.asserts_total, 2);
        assert_eq!(outcome.asserts_failed, 1);
        assert!(outcome.report.contains("**FAIL** (left 5, right 9999)"));
        assert!(outcome.report.contains("Status: **FAIL** (1 of 2 assertions passed)"));
    }

    #[test]
    fn diachronic_and_pooled_compute() {
        let outcome = run(concat!(
            "script demo\n",
            "compute relay = diachronic_table {\"queries\": [{\"label\": \"so+ADJ\", \"query\": \"[word=\\\"so\\\"] [pos=\\\"JJ.*\\\"]\"}]}\n",
            "compute pooled = pooled_comparison {\"table\": \"relay\", \"label\": \"so+ADJ\", \"early\": [\"early_19c\"], \"late\": [\"late_20c\"]}\n",
            "assert pooled.g2 >= 0\n",
            "table relay \"so + adjective across periods\"\n",
        ));
        assert_eq!(outcome.asserts_failed, 0);
        assert!(outcome.report.contains("| item | early_19c | late_20c |"));
        assert!(outcome.report.contains("| so+ADJ | 333333 (1) | 500000 (1) |"));
    }

    #[test]
    fn collocate_and_kappa_compute() {
        let outcome = run(concat!(
            "script demo\n",
            "compute prof = collocate_profile {\"counts\": {\"great\": 3, \"useless\": 1}}\n",
            "assert prof.polarity_shares.positive == 0.5\n",
            "compute agree = kappa {\"a\": [\"x\", \"x\", \"y\", \"y\"], \"b\": [\"x\", \"y\", \"y\", \"y\"]}\n",
            "assert agree.kappa == 0.5\n",
        ));
        assert_eq!(outcome.asserts_failed, 0);
    }

    #[test]
    fn from_rows_reference_sums_counts() {
        let outcome = run(concat!(
            "script demo\n",
            "call freq = cqp_frequency {\"query\": \"[word=\\\"so\\\"] [pos=\\\"JJ.*\\\"]\", \"count_by\": \"lemma\", \"count_token\": 1}\n",
            "compute prof = collocate_profile {\"from_rows\": {\"$\": \"freq\", \"path\": [\"rows\"]}}\n",
            "assert prof.types == 2\n",
            "assert prof.tokens == 2\n",
        ));
        assert_eq!(outcome.asserts_failed, 0);
    }

    #[test]
    fn tool_errors_abort_the_run() {
        let index = fixture_index();
        let script = parse_script(concat!(
            "script demo\n",
            "call bad = cqp_query {\"query\": \"[word=\"}\n",
        ))
        .unwrap();
        let lexicon = PolarityLexicon::seed();
        let err = run_script(&index, &script, &lexicon, "t").unwrap_err();
        assert!(format!("{err:#}").contains("cqp_query failed"));
    }

    #[test]
    fn row_selection_picks_unique_rows() {
        let outcome = run(concat!(
            "script demo\n",
            "call freq = cqp_frequency {\"query\": \"[pos=\\\"JJ.*\\\"]\", \"count_by\": \"lemma\", \"group_by\": \"match text_category\"}\n",
            "compute gd = pmw {\"hits\": {\"$\": \"freq\", \"row\": {\"group\": \"Drama\", \"counted\": \"good\"}, \"field\": \"count\"}, \"tokens\": {\"$\": \"freq\", \"path\": [\"group_token_totals\", \"Drama\"]}}\n",
            "assert gd.pmw == 333333.3333333333 within rel=1e-9\n",
        ));
        assert_eq!(outcome.asserts_failed, 0);
    }

    #[test]
    fn report_is_deterministic_except_timestamp() {
        let source = concat!(
            "script demo\n",
            "call info = corpus_info {}\n",
            "assert info.token_count == 5\n",
            "table info \"Corpus\"\n",
        );
        let index = fixture_index();
        let script = parse_script(source).unwrap();
        let lexicon = PolarityLexicon::seed();
        let one = run_script(&index, &script, &lexicon, "T1").unwrap();
        let two = run_script(&index, &script, &lexicon, "T2").unwrap();
        let strip = |r: &str| {
            r.lines()
                .filter(|l| !l.starts_with("_Generated:"))
                .collect::<Vec<_>>()
                .join("\n")
        };
        assert_ne!(one.report, two.report);
        assert_eq!(strip(&one.report), strip(&two.report));
    }
}
