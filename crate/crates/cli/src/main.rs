//! corq: index VRT corpora, query them, serve the query tools over
//! JSON-RPC with an audit log, and run checked research scripts.
//!
//! Exit codes: 0 success, 1 failed assertions or replay mismatches,
//! 2 usage or input errors.

mod config;
mod render;
mod runner;
mod script;
mod synth;

use anyhow::{anyhow, bail, Context, Result};
use chrono::{SecondsFormat, Utc};
use clap::{Parser, Subcommand};
use corq_corpus::vrt::build_index_with;
use corq_corpus::{Attr, CorpusIndex};
use corq_cqp::{parse_group_by, parse_metadata_filter, parse_query, MetadataFilter};
use corq_engine::{concordance, find_matches, frequency};
use corq_server::{replay_verify, serve, AuditLog};
use corq_stats::PolarityLexicon;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(name = "corq", version, about = "Corpus query engine with auditable tool calls")]
struct Cli {
    /// Config file (default: ./corq.toml when present).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Corpus index file (overrides CORPUS_INDEX_PATH and the config).
    #[arg(long, global = true)]
    index: Option<PathBuf>,

    /// Audit log file (overrides the config; default audit.jsonl).
    #[arg(long, global = true)]
    log: Option<PathBuf>,

    /// Random seed override for corpus generation.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output path (index, generated VRT, or script report).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ingest a VRT file into a binary corpus index.
    Index {
        /// VRT input file.
        vrt: PathBuf,
        /// Corpus name stored in the index (default: the file stem).
        #[arg(long)]
        name: Option<String>,
    },
    /// Generate a synthetic VRT corpus from a TOML spec.
    Synth {
        /// Generator spec (TOML).
        spec: PathBuf,
    },
    /// Print a concordance for a query.
    Query {
        /// Query, e.g. '[word="really"%c] [pos="JJ.*"]'.
        query: String,
        /// Metadata filter, e.g. 'match.text_category="Poetry"'.
        #[arg(long)]
        filter: Option<String>,
        /// Context width in tokens on each side.
        #[arg(long, default_value_t = 8)]
        context: usize,
        /// Skip this many matches first.
        #[arg(long, default_value_t = 0)]
        offset: usize,
        /// Show at most this many lines.
        #[arg(long, default_value_t = 20)]
        limit: usize,
    },
    /// Print a frequency table for a query.
    Freq {
        /// Query, e.g. '[pos="JJ.*"]'.
        query: String,
        /// Metadata filter applied before counting.
        #[arg(long)]
        filter: Option<String>,
        /// Attribute to count (word, lemma, pos, pos_fine, deprel, head).
        #[arg(long)]
        count_by: Option<String>,
        /// Count only this 0-based token of each match.
        #[arg(long)]
        count_token: Option<usize>,
        /// Cross-tabulate by a structural attribute: 'match text_category'.
        #[arg(long)]
        group_by: Option<String>,
        /// Show at most this many rows.
        #[arg(long, default_value_t = 50)]
        limit: usize,
    },
    /// Serve the query tools as JSON-RPC over stdin/stdout.
    Serve,
    /// Re-execute an audit log against the index and verify digests.
    Replay,
    /// Run a research script and write its report.
    Run {
        /// Script file.
        script: PathBuf,
        /// Extra polarity lexicon (TSV lemma<TAB>polarity) merged over the
        /// built-in seed lexicon.
        #[arg(long)]
        polarity: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    let cfg = config::Config::load(cli.config.as_deref())?;
    match &cli.command {
        Command::Index { vrt, name } => cmd_index(&cli, &cfg, vrt, name.as_deref()),
        Command::Synth { spec } => cmd_synth(&cli, spec),
        Command::Query { query, filter, context, offset, limit } => {
            cmd_query(&cli, &cfg, query, filter.as_deref(), *context, *offset, *limit)
        }
        Command::Freq { query, filter, count_by, count_token, group_by, limit } => cmd_freq(
            &cli,
            &cfg,
            query,
            filter.as_deref(),
            count_by.as_deref(),
            *count_token,
            group_by.as_deref(),
            *limit,
        ),
        Command::Serve => cmd_serve(&cli, &cfg),
        Command::Replay => cmd_replay(&cli, &cfg),
        Command::Run { script, polarity } => cmd_run(&cli, &cfg, script, polarity.as_deref()),
    }
}

/// Index path resolution: --index flag, then CORPUS_INDEX_PATH, then the
/// config file.
fn resolve_index_path(cli: &Cli, cfg: &config::Config) -> Result<PathBuf> {
    if let Some(path) = &cli.index {
        return Ok(path.clone());
    }
    if let Ok(path) = std::env::var(config::INDEX_ENV_VAR) {
        if !path.is_empty() {
            return Ok(PathBuf::from(path));
        }
    }
    if let Some(path) = &cfg.index {
        return Ok(path.clone());
    }
    bail!(
        "no corpus index: pass --index, set {}, or add `index = \"...\"` to corq.toml",
        config::INDEX_ENV_VAR
    );
}

fn load_index(cli: &Cli, cfg: &config::Config) -> Result<CorpusIndex> {
    let path = resolve_index_path(cli, cfg)?;
    CorpusIndex::load(&path).with_context(|| format!("loading index {}", path.display()))
}

fn resolve_log_path(cli: &Cli, cfg: &config::Config) -> PathBuf {
    cli.log
        .clone()
        .or_else(|| cfg.log.clone())
        .unwrap_or_else(|| PathBuf::from("audit.jsonl"))
}

fn cmd_index(cli: &Cli, cfg: &config::Config, vrt: &Path, name: Option<&str>) -> Result<ExitCode> {
    let name = match name {
        Some(name) => name.to_string(),
        None => vrt
            .file_stem()
            .and_then(|s| s.to_str())
            .ok_or_else(|| anyhow!("cannot derive a corpus name from {}", vrt.display()))?
            .to_string(),
    };
    let file = File::open(vrt).with_context(|| format!("opening {}", vrt.display()))?;
    let reader = BufReader::new(file);
    let index = build_index_with(reader, &name, &cfg.period_table()?)?;
    let out = cli.out.clone().unwrap_or_else(|| vrt.with_extension("idx"));
    index.save(&out).with_context(|| format!("writing {}", out.display()))?;
    println!("indexed {} tokens into {}", index.token_count(), out.display());
    println!("build digest: {}", index.build_digest());
    Ok(ExitCode::SUCCESS)
}

fn cmd_synth(cli: &Cli, spec_path: &Path) -> Result<ExitCode> {
    let text = std::fs::read_to_string(spec_path)
        .with_context(|| format!("reading {}", spec_path.display()))?;
    let spec = synth::parse_spec(&text)?;
    let seed = cli.seed.unwrap_or(spec.seed);
    let vrt = synth::generate(&spec, seed)?;
    let out = cli.out.clone().unwrap_or_else(|| spec_path.with_extension("vrt"));
    std::fs::write(&out, &vrt).with_context(|| format!("writing {}", out.display()))?;
    let tokens: u64 = spec.texts.iter().map(|t| t.tokens).sum();
    println!(
        "generated corpus {:?}: {} texts, {} tokens (seed {seed}) into {}",
        spec.name,
        spec.texts.len(),
        tokens,
        out.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn parse_filter(filter: Option<&str>) -> Result<MetadataFilter> {
    match filter {
        Some(text) => parse_metadata_filter(text).map_err(|e| anyhow!("metadata filter: {e}")),
        None => Ok(MetadataFilter::empty()),
    }
}

fn cmd_query(
    cli: &Cli,
    cfg: &config::Config,
    query: &str,
    filter: Option<&str>,
    context: usize,
    offset: usize,
    limit: usize,
) -> Result<ExitCode> {
    let index = load_index(cli, cfg)?;
    let ast = parse_query(query).map_err(|e| anyhow!("query: {e}"))?;
    let filter = parse_filter(filter)?;
    let spans = find_matches(&index, &ast, &filter)?;
    let lines = concordance(&index, &spans, context, offset, limit);
    print!("{}", render::render_kwic(&lines, spans.len(), offset));
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_freq(
    cli: &Cli,
    cfg: &config::Config,
    query: &str,
    filter: Option<&str>,
    count_by: Option<&str>,
    count_token: Option<usize>,
    group_by: Option<&str>,
    limit: usize,
) -> Result<ExitCode> {
    let index = load_index(cli, cfg)?;
    let ast = parse_query(query).map_err(|e| anyhow!("query: {e}"))?;
    let filter = parse_filter(filter)?;
    let count_by = count_by
        .map(|name| {
            Attr::from_str(name).map_err(|_| {
                anyhow!("unknown attribute {name:?} (expected word, lemma, pos, pos_fine, deprel, or head)")
            })
        })
        .transpose()?;
    let group_attr = group_by
        .map(|text| parse_group_by(text).map_err(|e| anyhow!("group_by: {e}")))
        .transpose()?;
    let spans = find_matches(&index, &ast, &filter)?;
    let table = frequency(&index, &spans, count_by, count_token, group_attr.as_deref())?;
    let shown = table.rows.len().min(limit);
    print!("{}", render::render_freq(&table, index.token_count(), shown));
    Ok(ExitCode::SUCCESS)
}

fn cmd_serve(cli: &Cli, cfg: &config::Config) -> Result<ExitCode> {
    let index = load_index(cli, cfg)?;
    let log_path = resolve_log_path(cli, cfg);
    let mut log = AuditLog::open(&log_path, cfg.fsync)?;
    eprintln!(
        "serving corpus {:?} ({} tokens), audit log {}, next seq {}",
        index.name(),
        index.token_count(),
        log_path.display(),
        log.next_seq()
    );
    let stdin = std::io::stdin();
    let stdout = std::io::stdout();
    serve(&index, stdin.lock(), &mut stdout.lock(), &mut log)?;
    eprintln!("input closed, shutting down");
    Ok(ExitCode::SUCCESS)
}

fn cmd_replay(cli: &Cli, cfg: &config::Config) -> Result<ExitCode> {
    let index = load_index(cli, cfg)?;
    let log_path = resolve_log_path(cli, cfg);
    let file = File::open(&log_path).with_context(|| format!("opening {}", log_path.display()))?;
    let report = replay_verify(&index, BufReader::new(file))?;
    println!("replayed {} records from {}", report.records, log_path.display());
    if report.is_clean() {
        println!("all result digests match");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("MISMATCH at seq: {:?}", report.mismatches);
        Ok(ExitCode::from(1))
    }
}

fn cmd_run(cli: &Cli, cfg: &config::Config, script_path: &Path, polarity: Option<&Path>) -> Result<ExitCode> {
    let index = load_index(cli, cfg)?;
    let text = std::fs::read_to_string(script_path)
        .with_context(|| format!("reading {}", script_path.display()))?;
    let script = script::parse_script(&text)
        .with_context(|| format!("parsing {}", script_path.display()))?;

    let mut lexicon = PolarityLexicon::seed();
    if let Some(path) = polarity {
        let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
        lexicon
            .extend_from_reader(BufReader::new(file))
            .with_context(|| format!("parsing polarity lexicon {}", path.display()))?;
    }

    let timestamp = Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true);
    let outcome = runner::run_script(&index, &script, &lexicon, &timestamp)?;

    let out = cli
        .out
        .clone()
        .unwrap_or_else(|| script_path.with_extension("report.md"));
    let mut file = File::create(&out).with_context(|| format!("writing {}", out.display()))?;
    file.write_all(outcome.report.as_bytes())?;

    println!(
        "script {:?}: {} of {} assertions passed, report written to {}",
        script.name,
        outcome.asserts_total - outcome.asserts_failed,
        outcome.asserts_total,
        out.display()
    );
    if outcome.asserts_failed > 0 {
        Ok(ExitCode::from(1))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}
