//! Seed-deterministic synthetic corpus generator.
//!
//! A spec file declares texts (category, author, year, token budget) and
//! per-text planted patterns: intensifier-adjective bigrams at target
//! per-million rates. The generator realizes each plant exactly
//! round(rate x tokens / 10^6) times. Fillers come from a closed vocabulary
//! with no adjectives and no intensifiers, so a planted bigram is the only
//! way `[word="X"] [pos="JJ.*"]` can match; measured rates then reproduce
//! the spec up to rounding.

use std::fmt::Write as _;

use anyhow::{bail, Context, Result};
use corq_corpus::vrt::escape_attr;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

/// Closed filler vocabulary: determiners, nouns, verbs. No JJ tags and no
/// overlap with plausible intensifiers, which keeps planted rates exact.
const FILLERS: &[(&str, &str)] = &[
    ("the", "DT"),
    ("a", "DT"),
    ("stone", "NN"),
    ("river", "NN"),
    ("path", "NN"),
    ("light", "NN"),
    ("wall", "NN"),
    ("morning", "NN"),
    ("harbor", "NN"),
    ("letter", "NN"),
    ("walks", "VBZ"),
    ("stands", "VBZ"),
    ("turns", "VBZ"),
    ("rests", "VBZ"),
];

/// Sentences close at the first unit boundary past this many tokens.
const SENTENCE_TARGET: usize = 12;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthSpec {
    /// Corpus display name, echoed when generating.
    pub name: String,
    /// Generator seed; the --seed flag overrides it.
    #[serde(default)]
    pub seed: u64,
    pub texts: Vec<TextSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TextSpec {
    pub id: String,
    pub category: String,
    #[serde(default = "default_author")]
    pub author: String,
    pub year: Option<i32>,
    pub tokens: u64,
    #[serde(default)]
    pub plants: Vec<PlantSpec>,
}

fn default_author() -> String {
    "Synthetic".to_string()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlantSpec {
    /// The intensifier token (emitted with POS RB, deprel advmod).
    pub word: String,
    /// Adjectives to pair it with (emitted with POS JJ, deprel amod).
    pub adjectives: Vec<String>,
    pub rate_pmw: f64,
}

impl PlantSpec {
    /// Exact occurrence count this plant gets in a text of `tokens` tokens.
    pub fn occurrences(&self, tokens: u64) -> u64 {
        (self.rate_pmw * tokens as f64 / 1_000_000.0).round() as u64
    }
}

pub fn parse_spec(text: &str) -> Result<SynthSpec> {
    let spec: SynthSpec = toml::from_str(text).context("parsing synth spec")?;
    for text_spec in &spec.texts {
        if text_spec.tokens == 0 {
            bail!("text {:?} has a zero token budget", text_spec.id);
        }
        for plant in &text_spec.plants {
            if plant.adjectives.is_empty() {
                bail!("plant {:?} in text {:?} lists no adjectives", plant.word, text_spec.id);
            }
            if plant.rate_pmw < 0.0 {
                bail!("plant {:?} in text {:?} has a negative rate", plant.word, text_spec.id);
            }
        }
    }
    Ok(spec)
}

enum Unit<'s> {
    Filler,
    Bigram(&'s PlantSpec),
}

/// Generates the corpus as VRT text. Identical (spec, seed) pairs produce
/// byte-identical output.
pub fn generate(spec: &SynthSpec, seed: u64) -> Result<String> {
    let mut out = String::new();
    for (text_index, text) in spec.texts.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(text_index as u64));
        generate_text(text, &mut rng, &mut out)?;
    }
    Ok(out)
}

fn generate_text(text: &TextSpec, rng: &mut ChaCha8Rng, out: &mut String) -> Result<()> {
    let counts: Vec<u64> = text.plants.iter().map(|p| p.occurrences(text.tokens)).collect();
    let bigram_tokens: u64 = counts.iter().map(|c| c * 2).sum();
    if bigram_tokens > text.tokens {
        bail!(
            "text {:?}: planted patterns need {bigram_tokens} tokens but the budget is {}",
            text.id,
            text.tokens
        );
    }
    let filler_count = text.tokens - bigram_tokens;
    let bigram_count: u64 = counts.iter().sum();
    let unit_count = filler_count + bigram_count;

    // Round-robin over plants with occurrences left, so multiple plants
    // interleave instead of clustering by declaration order.
    let mut plant_order: Vec<&PlantSpec> = Vec::with_capacity(bigram_count as usize);
    let mut remaining = counts.clone();
    while plant_order.len() < bigram_count as usize {
        for (i, plant) in text.plants.iter().enumerate() {
            if remaining[i] > 0 {
                remaining[i] -= 1;
                plant_order.push(plant);
            }
        }
    }
    let mut next_plant = plant_order.into_iter();

    write!(
        out,
        "<text id=\"{}\" author=\"{}\" text_category=\"{}\"",
        escape_attr(&text.id),
        escape_attr(&text.author),
        escape_attr(&text.category)
    )
    .unwrap();
    if let Some(year) = text.year {
        write!(out, " year=\"{year}\"").unwrap();
    }
    out.push_str(">\n");

    // Bresenham-style even spread: exactly bigram_count bigrams across
    // unit_count units, never two short of budget.
    let mut acc: u64 = unit_count / 2;
    let mut sentence_tokens = 0usize;
    let mut sentence_open = false;
    for _ in 0..unit_count {
        acc += bigram_count;
        let unit = if acc >= unit_count {
            acc -= unit_count;
            Unit::Bigram(next_plant.next().expect("plant order covers all bigrams"))
        } else {
            Unit::Filler
        };
        if !sentence_open {
            out.push_str("<s>\n");
            sentence_open = true;
        }
        match unit {
            Unit::Filler => {
                let (word, pos) = FILLERS[rng.gen_range(0..FILLERS.len())];
                push_token(out, word, word, pos, "dep", "0");
                sentence_tokens += 1;
            }
            Unit::Bigram(plant) => {
                let adjective = &plant.adjectives[rng.gen_range(0..plant.adjectives.len())];
                push_token(out, &plant.word, &plant.word, "RB", "advmod", "2");
                push_token(out, adjective, adjective, "JJ", "amod", "0");
                sentence_tokens += 2;
            }
        }
        if sentence_tokens >= SENTENCE_TARGET {
            out.push_str("</s>\n");
            sentence_open = false;
            sentence_tokens = 0;
        }
    }
    if sentence_open {
        out.push_str("</s>\n");
    }
    out.push_str("</text>\n");
    Ok(())
}

fn push_token(out: &mut String, word: &str, lemma: &str, pos: &str, deprel: &str, head: &str) {
    // Six tab-separated columns: word, lemma, pos, pos_fine, deprel, head.
    writeln!(out, "{word}\t{lemma}\t{pos}\t{pos}\t{deprel}\t{head}").unwrap();
}
