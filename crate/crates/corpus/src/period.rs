//! Year-to-period bucketing. Eight ordered periods cover all of i32 year
//! space, so every dated text lands in exactly one bucket.

use std::fmt;
use std::str::FromStr;

/// Diachronic period, ordered oldest to newest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Period {
    Ancient,
    Medieval,
    EarlyModern,
    C18,
    Early19c,
    Late19c,
    Early20c,
    Late20c,
}

impl Period {
    pub const ALL: [Period; 8] = [
        Period::Ancient,
        Period::Medieval,
        Period::EarlyModern,
        Period::C18,
        Period::Early19c,
        Period::Late19c,
        Period::Early20c,
        Period::Late20c,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Period::Ancient => "ancient",
            Period::Medieval => "medieval",
            Period::EarlyModern => "early_modern",
            Period::C18 => "c18",
            Period::Early19c => "early_19c",
            Period::Late19c => "late_19c",
            Period::Early20c => "early_20c",
            Period::Late20c => "late_20c",
        }
    }
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Period {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Period::ALL
            .iter()
            .copied()
            .find(|p| p.as_str() == s)
            .ok_or(())
    }
}

/// Upper-bound years for the first seven periods; the eighth is open-ended.
/// `cuts[i]` is the last year belonging to `Period::ALL[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodTable {
    cuts: [i32; 7],
}

impl Default for PeriodTable {
    fn default() -> Self {
        PeriodTable {
            cuts: [500, 1499, 1699, 1799, 1849, 1899, 1949],
        }
    }
}

impl PeriodTable {
    /// Custom boundaries; must be strictly increasing.
    pub fn new(cuts: [i32; 7]) -> Result<Self, String> {
        if cuts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(format!(
                "period boundaries must be strictly increasing, got {cuts:?}"
            ));
        }
        Ok(PeriodTable { cuts })
    }

    pub fn assign(&self, year: i32) -> Period {
        let idx = self.cuts.iter().position(|&c| year <= c).unwrap_or(7);
        Period::ALL[idx]
    }
}

/// Bucket a year using the default boundaries.
pub fn assign_period(year: i32) -> Period {
    PeriodTable::default().assign(year)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_examples() {
        assert_eq!(assign_period(-50), Period::Ancient);
        assert_eq!(assign_period(1960), Period::Late20c);
        assert_eq!(assign_period(1858), Period::Late19c);
    }

    #[test]
    fn boundary_years() {
        assert_eq!(assign_period(500), Period::Ancient);
        assert_eq!(assign_period(501), Period::Medieval);
        assert_eq!(assign_period(1499), Period::Medieval);
        assert_eq!(assign_period(1500), Period::EarlyModern);
        assert_eq!(assign_period(1699), Period::EarlyModern);
        assert_eq!(assign_period(1700), Period::C18);
        assert_eq!(assign_period(1799), Period::C18);
        assert_eq!(assign_period(1800), Period::Early19c);
        assert_eq!(assign_period(1849), Period::Early19c);
        assert_eq!(assign_period(1850), Period::Late19c);
        assert_eq!(assign_period(1899), Period::Late19c);
        assert_eq!(assign_period(1900), Period::Early20c);
        assert_eq!(assign_period(1949), Period::Early20c);
        assert_eq!(assign_period(1950), Period::Late20c);
        assert_eq!(assign_period(i32::MIN), Period::Ancient);
        assert_eq!(assign_period(i32::MAX), Period::Late20c);
    }

    #[test]
    fn custom_cuts_validated() {
        assert!(PeriodTable::new([1, 2, 3, 4, 5, 6, 6]).is_err());
        let t = PeriodTable::new([0, 1000, 1500, 1700, 1800, 1900, 2000]).unwrap();
        assert_eq!(t.assign(1999), Period::Early20c);
    }

    #[test]
    fn labels_round_trip() {
        for p in Period::ALL {
            assert_eq!(p.as_str().parse::<Period>(), Ok(p));
        }
    }
}
