//! Collocate distribution profiles and the polarity lexicon behind them.
//!
//! A profile condenses a collocate frequency list into diversity measures
//! (type and token counts, hapax ratio), concentration (how much of the mass
//! the top five collocates hold), and semantic polarity shares driven by a
//! small hand-curated lexicon.

use std::collections::BTreeMap;
use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use serde::Serialize;

use crate::error::StatsError;

/// Semantic polarity of a collocate lemma.
///
/// `Privative` covers words that denote absence, lack, or negation
/// ("impossible", "devoid") as opposed to plain undesirability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
    Neutral,
    Privative,
}

impl Polarity {
    pub const ALL: [Polarity; 4] = [
        Polarity::Positive,
        Polarity::Negative,
        Polarity::Neutral,
        Polarity::Privative,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Polarity::Positive => "positive",
            Polarity::Negative => "negative",
            Polarity::Neutral => "neutral",
            Polarity::Privative => "privative",
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Polarity {
    type Err = ();

    fn from_str(s: &str) -> Result<Polarity, ()> {
        match s {
            "positive" => Ok(Polarity::Positive),
            "negative" => Ok(Polarity::Negative),
            "neutral" => Ok(Polarity::Neutral),
            "privative" => Ok(Polarity::Privative),
            _ => Err(()),
        }
    }
}

/// Result of looking a lemma up in a [`PolarityLexicon`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classified {
    pub polarity: Polarity,
    /// False when the lemma was absent and defaulted to neutral.
    pub listed: bool,
}

/// Lowercase lemma to polarity mapping.
#[derive(Debug, Clone, Default)]
pub struct PolarityLexicon {
    entries: BTreeMap<String, Polarity>,
}

impl PolarityLexicon {
    /// The built-in seed lexicon: five clearly positive, five clearly
    /// negative, and five privative lemmas. Small on purpose; real studies
    /// extend it with [`PolarityLexicon::from_reader`].
    pub fn seed() -> PolarityLexicon {
        let mut entries = BTreeMap::new();
        for lemma in ["great", "beautiful", "glorious", "magnificent", "wonderful"] {
            entries.insert(lemma.to_string(), Polarity::Positive);
        }
        for lemma in ["useless", "hopeless", "worthless", "meaningless", "dead"] {
            entries.insert(lemma.to_string(), Polarity::Negative);
        }
        for lemma in ["impossible", "unknown", "unable", "incomprehensible", "devoid"] {
            entries.insert(lemma.to_string(), Polarity::Privative);
        }
        PolarityLexicon { entries }
    }

    pub fn empty() -> PolarityLexicon {
        PolarityLexicon::default()
    }

    /// Reads `lemma<TAB>polarity` lines. Blank lines and lines starting with
    /// `#` are skipped. Lemmas are lowercased on load; a lemma appearing
    /// twice is an error rather than a silent overwrite.
    pub fn from_reader<R: BufRead>(reader: R) -> Result<PolarityLexicon, StatsError> {
        let mut lexicon = PolarityLexicon::default();
        lexicon.extend_from_reader(reader)?;
        Ok(lexicon)
    }

    /// Merges additional entries into this lexicon, with the same rules as
    /// [`PolarityLexicon::from_reader`]. Collisions with existing entries
    /// are also duplicates.
    pub fn extend_from_reader<R: BufRead>(&mut self, reader: R) -> Result<(), StatsError> {
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let line_num = lineno + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (lemma, label) = trimmed
                .split_once('\t')
                .ok_or(StatsError::BadLexiconLine { line: line_num })?;
            let lemma = lemma.trim().to_lowercase();
            let label = label.trim();
            if lemma.is_empty() {
                return Err(StatsError::BadLexiconLine { line: line_num });
            }
            let polarity = label.parse::<Polarity>().map_err(|_| StatsError::BadPolarity {
                line: line_num,
                value: label.to_string(),
            })?;
            if self.entries.insert(lemma.clone(), polarity).is_some() {
                return Err(StatsError::DuplicateLexiconEntry { line: line_num, lemma });
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Case-insensitive lookup; absent lemmas classify as neutral but are
    /// flagged unlisted so callers can report lexicon coverage.
    pub fn classify(&self, lemma: &str) -> Classified {
        match self.entries.get(&lemma.to_lowercase()) {
            Some(&polarity) => Classified { polarity, listed: true },
            None => Classified { polarity: Polarity::Neutral, listed: false },
        }
    }
}

/// How polarity shares weight each collocate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ShareWeighting {
    /// Each distinct collocate counts once.
    #[default]
    TypeWeighted,
    /// Each occurrence counts.
    TokenWeighted,
}

/// One collocate with its occurrence count, used for the top-5 listing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CollocateCount {
    pub lemma: String,
    pub count: u64,
}

/// Distributional summary of a collocate frequency list.
#[derive(Debug, Clone, Serialize)]
pub struct CollocateProfile {
    pub types: u64,
    pub tokens: u64,
    /// Share of all occurrences held by the five most frequent collocates
    /// (all of them when there are fewer than five types).
    pub top5_concentration: f64,
    /// Share of types occurring exactly once.
    pub hapax_ratio: f64,
    /// Share of each polarity class; sums to 1.
    pub polarity_shares: BTreeMap<Polarity, f64>,
    /// Types absent from the lexicon (these count as neutral in the shares).
    pub unlisted_types: u64,
    /// The collocates behind `top5_concentration`, most frequent first,
    /// ties broken by ascending lemma.
    pub top5: Vec<CollocateCount>,
}

/// Profiles a collocate frequency list with the default type weighting.
pub fn collocate_profile(
    counts: &BTreeMap<String, u64>,
    lexicon: &PolarityLexicon,
) -> Result<CollocateProfile, StatsError> {
    collocate_profile_weighted(counts, lexicon, ShareWeighting::TypeWeighted)
}

pub fn collocate_profile_weighted(
    counts: &BTreeMap<String, u64>,
    lexicon: &PolarityLexicon,
    weighting: ShareWeighting,
) -> Result<CollocateProfile, StatsError> {
    if counts.is_empty() {
        return Err(StatsError::EmptyCollocates);
    }
    if let Some((lemma, _)) = counts.iter().find(|(_, &c)| c == 0) {
        return Err(StatsError::ZeroCount { lemma: lemma.clone() });
    }

    let types = counts.len() as u64;
    let tokens: u64 = counts.values().sum();
    let hapaxes = counts.values().filter(|&&c| c == 1).count() as u64;

    // BTreeMap iteration is already ascending by lemma, so a stable sort on
    // descending count leaves ties in lexicographic order.
    let mut ranked: Vec<(&String, u64)> = counts.iter().map(|(l, &c)| (l, c)).collect();
    ranked.sort_by_key(|&(_, count)| std::cmp::Reverse(count));
    let top5: Vec<CollocateCount> = ranked
        .iter()
        .take(5)
        .map(|&(lemma, count)| CollocateCount { lemma: lemma.clone(), count })
        .collect();
    let top5_mass: u64 = top5.iter().map(|c| c.count).sum();

    let mut class_weight: BTreeMap<Polarity, u64> = BTreeMap::new();
    let mut unlisted_types = 0;
    for (lemma, &count) in counts {
        let classified = lexicon.classify(lemma);
        if !classified.listed {
            unlisted_types += 1;
        }
        let weight = match weighting {
            ShareWeighting::TypeWeighted => 1,
            ShareWeighting::TokenWeighted => count,
        };
        *class_weight.entry(classified.polarity).or_insert(0) += weight;
    }
    let share_base = match weighting {
        ShareWeighting::TypeWeighted => types,
        ShareWeighting::TokenWeighted => tokens,
    } as f64;
    let polarity_shares: BTreeMap<Polarity, f64> = Polarity::ALL
        .iter()
        .map(|&p| (p, class_weight.get(&p).copied().unwrap_or(0) as f64 / share_base))
        .collect();

    Ok(CollocateProfile {
        types,
        tokens,
        top5_concentration: top5_mass as f64 / tokens as f64,
        hapax_ratio: hapaxes as f64 / types as f64,
        polarity_shares,
        unlisted_types,
        top5,
    })
}
