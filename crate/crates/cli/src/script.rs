//! Research script format: a line-oriented plan of tool calls, derived
//! statistics, assertions, and report tables.
//!
//! ```text
//! script register
//! # comments start with a hash
//! call freq = cqp_frequency {"query": "[word=\"really\"%c] [pos=\"JJ.*\"]", "group_by": "match text_category"}
//! compute drama = pmw {"hits": {"$": "freq", "path": ["group_hit_totals", "Drama"]},
//! #                    ^ inputs are literal JSON; {"$": name, ...} references a bound result
//! assert drama.pmw == 352 within rel=0.06
//! assert drama.pmw / poetry.pmw >= 15
//! table freq "Intensifier frequency by register"
//! ```
//!
//! Every name is bound by exactly one `call` or `compute` step before any
//! use; violations are parse errors, not run-time surprises.

use anyhow::{anyhow, bail, Context, Result};
use serde_json::Value;
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq)]
pub struct Script {
    pub name: String,
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    Call { name: String, tool: String, params: Value },
    Compute { name: String, kind: ComputeKind, inputs: Value },
    Assert(Assertion),
    Table { name: String, caption: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComputeKind {
    Pmw,
    G2,
    PooledComparison,
    CollocateProfile,
    DiachronicTable,
    Kappa,
}

impl ComputeKind {
    fn parse(s: &str) -> Option<ComputeKind> {
        Some(match s {
            "pmw" => ComputeKind::Pmw,
            "g2" => ComputeKind::G2,
            "pooled_comparison" => ComputeKind::PooledComparison,
            "collocate_profile" => ComputeKind::CollocateProfile,
            "diachronic_table" => ComputeKind::DiachronicTable,
            "kappa" => ComputeKind::Kappa,
            _ => return None,
        })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ComputeKind::Pmw => "pmw",
            ComputeKind::G2 => "g2",
            ComputeKind::PooledComparison => "pooled_comparison",
            ComputeKind::CollocateProfile => "collocate_profile",
            ComputeKind::DiachronicTable => "diachronic_table",
            ComputeKind::Kappa => "kappa",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Assertion {
    pub line: usize,
    /// The assert line as written, echoed in reports.
    pub source: String,
    pub lhs: Expr,
    pub cmp: Cmp,
    pub rhs: Expr,
    pub tolerance: Option<Tolerance>,
}

/// An operand or a quotient of two operands (for ratio checks).
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Operand(Operand),
    Quotient(Operand, Operand),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Operand {
    Number(f64),
    Path(RefPath),
}

/// `name.seg.seg` with optional double-quoted segments for keys containing
/// dots or other punctuation: `freq.group_token_totals."Plays/Films/Dramas"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefPath {
    pub name: String,
    pub segments: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Eq,
    Ne,
    Le,
    Ge,
    Lt,
    Gt,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tolerance {
    Abs(f64),
    Rel(f64),
}

pub fn parse_script(text: &str) -> Result<Script> {
    let mut name = None;
    let mut steps = Vec::new();
    let mut bound: BTreeSet<String> = BTreeSet::new();

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        let result = match keyword {
            "script" => {
                if name.is_some() {
                    Err(anyhow!("duplicate script header"))
                } else if rest.is_empty() {
                    Err(anyhow!("script header needs a name"))
                } else {
                    name = Some(rest.to_string());
                    Ok(())
                }
            }
            _ if name.is_none() => Err(anyhow!("first statement must be `script <name>`")),
            "call" => parse_call(rest, &mut bound).map(|s| steps.push(s)),
            "compute" => parse_compute(rest, &bound.clone(), &mut bound).map(|s| steps.push(s)),
            "assert" => {
                parse_assert(rest, lineno, &bound).map(|a| steps.push(Step::Assert(a)))
            }
            "table" => parse_table(rest, &bound).map(|s| steps.push(s)),
            other => Err(anyhow!("unknown statement {other:?}")),
        };
        result.with_context(|| format!("script line {lineno}: {line}"))?;
    }

    let name = name.ok_or_else(|| anyhow!("script file has no `script <name>` header"))?;
    Ok(Script { name, steps })
}

fn parse_binding<'a>(rest: &'a str, what: &str) -> Result<(String, &'a str)> {
    let (name, rest) = rest
        .split_once(char::is_whitespace)
        .ok_or_else(|| anyhow!("{what} needs `NAME = ...`"))?;
    let rest = rest.trim();
    let rest = rest
        .strip_prefix('=')
        .ok_or_else(|| anyhow!("expected `=` after the bound name"))?
        .trim();
    if !is_valid_name(name) {
        bail!("invalid name {name:?}: use letters, digits, and underscores");
    }
    Ok((name.to_string(), rest))
}

fn is_valid_name(name: &str) -> bool {
    !name.is_empty()
        && name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn bind(bound: &mut BTreeSet<String>, name: &str) -> Result<()> {
    if !bound.insert(name.to_string()) {
        bail!("name {name:?} is already bound");
    }
    Ok(())
}

fn parse_call(rest: &str, bound: &mut BTreeSet<String>) -> Result<Step> {
    let (name, rest) = parse_binding(rest, "call")?;
    let (tool, json) = rest
        .split_once(char::is_whitespace)
        .ok_or_else(|| anyhow!("call needs `NAME = TOOL {{json arguments}}`"))?;
    let params: Value = serde_json::from_str(json.trim()).context("parsing call arguments")?;
    if !params.is_object() {
        bail!("call arguments must be a JSON object");
    }
    check_refs(&params, bound)?;
    bind(bound, &name)?;
    Ok(Step::Call { name, tool: tool.to_string(), params })
}

fn parse_compute(rest: &str, visible: &BTreeSet<String>, bound: &mut BTreeSet<String>) -> Result<Step> {
    let (name, rest) = parse_binding(rest, "compute")?;
    let (kind, json) = rest
        .split_once(char::is_whitespace)
        .ok_or_else(|| anyhow!("compute needs `NAME = KIND {{json inputs}}`"))?;
    let kind = ComputeKind::parse(kind).ok_or_else(|| {
        anyhow!("unknown compute kind {kind:?} (expected pmw, g2, pooled_comparison, collocate_profile, diachronic_table, or kappa)")
    })?;
    let inputs: Value = serde_json::from_str(json.trim()).context("parsing compute inputs")?;
    if !inputs.is_object() {
        bail!("compute inputs must be a JSON object");
    }
    check_refs(&inputs, visible)?;
    bind(bound, &name)?;
    Ok(Step::Compute { name, kind, inputs })
}

/// References inside params/inputs look like {"$": "name", ...}; every
/// referenced name must already be bound.
fn check_refs(value: &Value, bound: &BTreeSet<String>) -> Result<()> {
    match value {
        Value::Object(map) => {
            if let Some(target) = map.get("$") {
                let target = target
                    .as_str()
                    .ok_or_else(|| anyhow!("reference {{\"$\": ...}} must name a string"))?;
                if !bound.contains(target) {
                    bail!("reference to unbound name {target:?}");
                }
            }
            for v in map.values() {
                check_refs(v, bound)?;
            }
        }
        Value::Array(items) => {
            for v in items {
                check_refs(v, bound)?;
            }
        }
        _ => {}
    }
    Ok(())
}

fn parse_table(rest: &str, bound: &BTreeSet<String>) -> Result<Step> {
    let (name, rest) = rest
        .split_once(char::is_whitespace)
        .ok_or_else(|| anyhow!("table needs `NAME \"caption\"`"))?;
    if !bound.contains(name) {
        bail!("table references unbound name {name:?}");
    }
    let caption = rest.trim();
    let caption = caption
        .strip_prefix('"')
        .and_then(|c| c.strip_suffix('"'))
        .ok_or_else(|| anyhow!("table caption must be double-quoted"))?;
    Ok(Step::Table { name: name.to_string(), caption: caption.to_string() })
}

fn parse_assert(rest: &str, line: usize, bound: &BTreeSet<String>) -> Result<Assertion> {
    let tokens = tokenize(rest)?;
    let mut iter = tokens.into_iter().peekable();

    let lhs = parse_expr(&mut iter, bound)?;
    let cmp = match iter.next().as_deref() {
        Some("==") => Cmp::Eq,
        Some("!=") => Cmp::Ne,
        Some("<=") => Cmp::Le,
        Some(">=") => Cmp::Ge,
        Some("<") => Cmp::Lt,
        Some(">") => Cmp::Gt,
        other => bail!("expected a comparison operator, found {other:?}"),
    };
    let rhs = parse_expr(&mut iter, bound)?;

    let tolerance = match iter.next() {
        None => None,
        Some(ref word) if word == "within" => {
            let spec = iter.next().ok_or_else(|| anyhow!("`within` needs abs=X or rel=X"))?;
            let (kind, value) = spec
                .split_once('=')
                .ok_or_else(|| anyhow!("`within` needs abs=X or rel=X, found {spec:?}"))?;
            let value: f64 = value.parse().context("parsing tolerance value")?;
            if value < 0.0 {
                bail!("tolerance must be non-negative");
            }
            let tolerance = match kind {
                "abs" => Tolerance::Abs(value),
                "rel" => Tolerance::Rel(value),
                other => bail!("unknown tolerance kind {other:?} (expected abs or rel)"),
            };
            if !matches!(cmp, Cmp::Eq | Cmp::Ne) {
                bail!("`within` applies only to == and !=");
            }
            Some(tolerance)
        }
        Some(other) => bail!("unexpected trailing token {other:?}"),
    };
    if iter.next().is_some() {
        bail!("unexpected tokens after the assertion");
    }

    Ok(Assertion { line, source: format!("assert {rest}"), lhs, cmp, rhs, tolerance })
}

fn parse_expr(
    iter: &mut std::iter::Peekable<std::vec::IntoIter<String>>,
    bound: &BTreeSet<String>,
) -> Result<Expr> {
    let first = parse_operand(
        &iter.next().ok_or_else(|| anyhow!("assertion ended where a value was expected"))?,
        bound,
    )?;
    if iter.peek().map(String::as_str) == Some("/") {
        iter.next();
        let second = parse_operand(
            &iter.next().ok_or_else(|| anyhow!("`/` needs a right-hand operand"))?,
            bound,
        )?;
        Ok(Expr::Quotient(first, second))
    } else {
        Ok(Expr::Operand(first))
    }
}

fn parse_operand(token: &str, bound: &BTreeSet<String>) -> Result<Operand> {
    if token.starts_with(|c: char| c.is_ascii_digit() || c == '-' || c == '.') {
        let number: f64 = token.parse().with_context(|| format!("parsing number {token:?}"))?;
        return Ok(Operand::Number(number));
    }
    let path = parse_path(token)?;
    if !bound.contains(&path.name) {
        bail!("reference to unbound name {:?}", path.name);
    }
    Ok(Operand::Path(path))
}

/// Splits `name.seg."quoted seg".seg` on dots outside quotes.
fn parse_path(token: &str) -> Result<RefPath> {
    let mut segments = Vec::new();
    let mut current = String::new();
    let mut in_quotes = false;
    for c in token.chars() {
        match c {
            '"' => in_quotes = !in_quotes,
            '.' if !in_quotes => {
                segments.push(std::mem::take(&mut current));
                continue;
            }
            _ => current.push(c),
        }
    }
    if in_quotes {
        bail!("unterminated quote in path {token:?}");
    }
    segments.push(current);
    if segments.iter().any(String::is_empty) {
        bail!("empty path segment in {token:?}");
    }
    let name = segments.remove(0);
    if !is_valid_name(&name) {
        bail!("path must start with a bound name, found {name:?}");
    }
    Ok(RefPath { name, segments })
}

/// Whitespace tokenizer that keeps double-quoted stretches intact (quotes
/// included) so path segments may contain spaces and punctuation.
fn tokenize(text: &str) -> Result<Vec<String>> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut in_quotes = false;
    for c in text.chars() {
        match c {
            '"' => {
                in_quotes = !in_quotes;
                current.push(c);
            }
            c if c.is_whitespace() && !in_quotes => {
                if !current.is_empty() {
                    tokens.push(std::mem::take(&mut current));
                }
            }
            c => current.push(c),
        }
    }
    if in_quotes {
        bail!("unterminated quote");
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    Ok(tokens)
}
