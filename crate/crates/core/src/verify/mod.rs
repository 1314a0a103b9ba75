//! Seeded self-check suites. Every check draws its random instances from its
//! own generator, so a check gives the same result whichever suite runs it.

mod criteria;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use criteria::{adjudication_table, AdjudicationRow};

/// Direction in which a measured value is compared with its threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    /// The worst value must not exceed the threshold.
    AtMost,
    /// The worst value must be at least the threshold.
    AtLeast,
}

/// One measured quantity of a check: the worst value over all instances.
#[derive(Clone, Debug, PartialEq)]
pub struct Item {
    pub label: String,
    pub worst: f64,
    pub threshold: f64,
    pub bound: Bound,
    pub instances: usize,
    pub error: Option<String>,
}

impl Item {
    pub(crate) fn at_most(label: impl Into<String>, threshold: f64) -> Self {
        Self {
            label: label.into(),
            worst: 0.0,
            threshold,
            bound: Bound::AtMost,
            instances: 0,
            error: None,
        }
    }

    pub(crate) fn at_least(label: impl Into<String>, threshold: f64) -> Self {
        Self {
            worst: f64::INFINITY,
            bound: Bound::AtLeast,
            ..Self::at_most(label, threshold)
        }
    }

    pub(crate) fn record(&mut self, value: f64) {
        self.instances += 1;
        if value.is_nan() {
            self.error.get_or_insert_with(|| "NaN encountered".into());
            return;
        }
        self.worst = match self.bound {
            Bound::AtMost => self.worst.max(value),
            Bound::AtLeast => self.worst.min(value),
        };
    }

    /// Records the outcome of a fallible measurement.
    pub(crate) fn record_result(&mut self, value: crate::Result<f64>) {
        match value {
            Ok(v) => self.record(v),
            Err(e) => {
                self.instances += 1;
                self.error.get_or_insert_with(|| e.to_string());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.error.is_none()
            && self.instances > 0
            && match self.bound {
                Bound::AtMost => self.worst <= self.threshold,
                Bound::AtLeast => self.worst >= self.threshold,
            }
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.bound {
            Bound::AtMost => "<=",
            Bound::AtLeast => ">=",
        };
        write!(
            f,
            "{} {}: worst {:.3e} (need {op} {:.1e}, {} instances)",
            if self.passed() { "ok  " } else { "FAIL" },
            self.label,
            self.worst,
            self.threshold,
            self.instances
        )?;
        if let Some(e) = &self.error {
            write!(f, " error: {e}")?;
        }
        Ok(())
    }
}

/// Outcome of one numbered acceptance criterion.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub id: u8,
    pub title: &'static str,
    pub items: Vec<Item>,
    /// Extra reference values printed under the items.
    pub notes: Vec<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.items.iter().all(Item::passed)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "[{}] {:>2} {}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.id,
            self.title
        )?;
        for item in &self.items {
            writeln!(f, "       {item}")?;
        }
        for note in &self.notes {
            writeln!(f, "       note: {note}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Hellinger,
    Curves,
    Fr,
    Families,
    All,
}

impl Suite {
    pub fn criteria(self) -> &'static [u8] {
        match self {
            Suite::Hellinger => &[1, 2, 3, 5, 6],
            Suite::Curves => &[4],
            Suite::Fr => &[7, 9, 11],
            Suite::Families => &[8, 10],
            Suite::All => &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Hellinger => "hellinger",
            Suite::Curves => "curves",
            Suite::Fr => "fr",
            Suite::Families => "families",
            Suite::All => "all",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown suite '{0}' (expected hellinger, curves, fr, families or all)")]
pub struct UnknownSuite(pub String);

impl FromStr for Suite {
    type Err = UnknownSuite;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hellinger" => Ok(Suite::Hellinger),
            "curves" => Ok(Suite::Curves),
            "fr" => Ok(Suite::Fr),
            "families" => Ok(Suite::Families),
            "all" => Ok(Suite::All),
            other => Err(UnknownSuite(other.to_owned())),
        }
    }
}

/// Generator for check `id` under `seed`.
pub(crate) fn rng_for(id: u8, seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ u64::from(id))
}

/// Runs acceptance criterion `id` (1 to 11).
pub fn run_check(id: u8, seed: u64) -> Option<Check> {
    let mut rng = rng_for(id, seed);
    Some(match id {
        1 => criteria::geodesic_constant_speed(&mut rng),
        2 => criteria::tv_sandwich(&mut rng),
        3 => criteria::hilbert_identities(&mut rng),
        4 => criteria::speed_identity(&mut rng),
        5 => criteria::product_formulas(&mut rng),
        6 => criteria::pushforward_contraction(&mut rng),
        7 => criteria::spherical_and_cone(&mut rng),
        8 => criteria::fisher_matrices(&mut rng),
        9 => criteria::closed_fr_vs_numeric(&mut rng),
        10 => criteria::gaussian_suite(&mut rng),
        11 => criteria::product_additivity(&mut rng),
        _ => return None,
    })
}

#[derive(Clone, Debug)]
pub struct Report {
    pub suite: Suite,
    pub seed: u64,
    pub checks: Vec<Check>,
    /// Present for suites that include the Gaussian checks.
    pub adjudication: Option<Vec<AdjudicationRow>>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

pub fn run_suite(suite: Suite, seed: u64) -> Report {
    let checks = suite
        .criteria()
        .iter()
        .filter_map(|&id| run_check(id, seed))
        .collect();
    let adjudication = matches!(suite, Suite::Families | Suite::All).then(|| adjudication_table(seed));
    Report {
        suite,
        seed,
        checks,
        adjudication,
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {} (seed {})", self.suite.name(), self.seed)?;
        for check in &self.checks {
            write!(f, "{check}")?;
        }
        if let Some(rows) = &self.adjudication {
            writeln!(f)?;
            writeln!(f, "one-dimensional Gaussian prefactor adjudication")?;
            writeln!(
                f,
                "{:>8} {:>8} {:>8} {:>8} {:>14} {:>14} {:>14} {:>11} {:>11} {:>14}",
                "m1-m0", "S0", "S1", "sigma", "shooting", "sigma*M", "sigma*M/2", "rel(sM)", "rel(sM/2)", "He-length"
            )?;
            for r in rows {
                writeln!(f, "{r}")?;
            }
        }
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        writeln!(f)?;
        writeln!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}
