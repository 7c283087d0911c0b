//! Optional TOML configuration for default paths and period boundaries.
//!
//! Lookup order for every setting: command-line flag, then environment
//! (index path only), then config file, then none. The config file is
//! `corq.toml` in the working directory unless --config points elsewhere.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use corq_corpus::PeriodTable;
use serde::Deserialize;

pub const INDEX_ENV_VAR: &str = "CORPUS_INDEX_PATH";
const DEFAULT_CONFIG_FILE: &str = "corq.toml";

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    /// Default index file served and queried.
    pub index: Option<PathBuf>,
    /// Default audit log path.
    pub log: Option<PathBuf>,
    /// Sync every audit record to disk (durable but slower).
    #[serde(default)]
    pub fsync: bool,
    /// Override the seven period boundary years (each is the last year of
    /// its period; the eighth period is open-ended).
    pub period_cuts: Option<Vec<i32>>,
}

impl Config {
    /// Loads an explicit config file, or the default one when present, or
    /// empty defaults.
    pub fn load(explicit: Option<&Path>) -> Result<Config> {
        let path = match explicit {
            Some(p) => p.to_path_buf(),
            None => {
                let default = PathBuf::from(DEFAULT_CONFIG_FILE);
                if !default.exists() {
                    return Ok(Config::default());
                }
                default
            }
        };
        let text = std::fs::read_to_string(&path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let config: Config = toml::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        Ok(config)
    }

    pub fn period_table(&self) -> Result<PeriodTable> {
        match &self.period_cuts {
            None => Ok(PeriodTable::default()),
            Some(cuts) => {
                let array: [i32; 7] = cuts
                    .as_slice()
                    .try_into()
                    .map_err(|_| anyhow::anyhow!("period_cuts must list exactly 7 years"))?;
                match PeriodTable::new(array) {
                    Ok(table) => Ok(table),
                    Err(reason) => bail!("invalid period_cuts: {reason}"),
                }
            }
        }
    }
}
