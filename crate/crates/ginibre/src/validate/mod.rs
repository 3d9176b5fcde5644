//! Validation suites: each acceptance criterion is a function returning named checks with a
//! target, a measured value, a tolerance and a verdict.

mod criteria;

use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use criteria::pfaffian_by_expansion;

/// Smallest Monte Carlo budget that still yields meaningful standard errors.
pub const MIN_SAMPLE_BUDGET: usize = 1_000;

/// One measured quantity and its verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub criterion: u8,
    pub name: String,
    pub target: f64,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `|measured − target| ≤ tolerance`.
    pub fn near(criterion: u8, name: impl Into<String>, measured: f64, target: f64, tolerance: f64) -> Self {
        Self {
            criterion,
            name: name.into(),
            target,
            measured,
            tolerance,
            pass: (measured - target).abs() <= tolerance,
        }
    }

    /// Passes when `0 ≤ measured ≤ tolerance`; used for residuals, distances and z-scores.
    pub fn at_most(criterion: u8, name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self {
            criterion,
            name: name.into(),
            target: 0.0,
            measured,
            tolerance,
            pass: (0.0..=tolerance).contains(&measured),
        }
    }

    /// Passes when `measured ≥ target`.
    pub fn at_least(criterion: u8, name: impl Into<String>, measured: f64, target: f64) -> Self {
        Self {
            criterion,
            name: name.into(),
            target,
            measured,
            tolerance: 0.0,
            pass: measured >= target,
        }
    }

    /// A yes/no condition, recorded as `1` or `0` against target `1`.
    pub fn holds(criterion: u8, name: impl Into<String>, ok: bool) -> Self {
        Self {
            criterion,
            name: name.into(),
            target: 1.0,
            measured: if ok { 1.0 } else { 0.0 },
            tolerance: 0.0,
            pass: ok,
        }
    }
}

/// Groups of criteria that can be run on their own.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Pfaffian,
    Oracle,
    Montecarlo,
    Limits,
    Figures,
    All,
}

impl Suite {
    /// Criterion numbers run by this suite.
    pub fn criteria(&self) -> &'static [u8] {
        match self {
            Suite::Pfaffian => &[1, 2, 3],
            Suite::Oracle => &[4, 5],
            Suite::Montecarlo => &[6, 11],
            Suite::Limits => &[7, 8, 9, 10],
            Suite::Figures => &[12],
            Suite::All => &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Pfaffian => "pfaffian",
            Suite::Oracle => "oracle",
            Suite::Montecarlo => "montecarlo",
            Suite::Limits => "limits",
            Suite::Figures => "figures",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "pfaffian" => Suite::Pfaffian,
            "oracle" => Suite::Oracle,
            "montecarlo" | "monte-carlo" | "mc" => Suite::Montecarlo,
            "limits" => Suite::Limits,
            "figures" => Suite::Figures,
            "all" => Suite::All,
            other => return Err(Error::Domain(format!("unknown suite {other:?}"))),
        })
    }
}

/// Seed and sample counts for the randomized criteria.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationOptions {
    pub seed: u64,
    /// Real Ginibre matrices of size 8.
    pub ginoe_samples: usize,
    /// Complex Ginibre matrices of size 16.
    pub ginue_samples: usize,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self {
            seed: 42,
            ginoe_samples: 10_000,
            ginue_samples: 100_000,
        }
    }
}

impl ValidationOptions {
    /// Caps both sample counts at `budget`.
    pub fn with_budget(mut self, budget: usize) -> Result<Self> {
        if budget < MIN_SAMPLE_BUDGET {
            return Err(Error::BudgetExhausted(format!(
                "a budget of {budget} samples is below the minimum of {MIN_SAMPLE_BUDGET}"
            )));
        }
        self.ginoe_samples = self.ginoe_samples.min(budget);
        self.ginue_samples = self.ginue_samples.min(budget);
        Ok(self)
    }
}

/// The checks of one criterion and the time they took.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub criterion: u8,
    pub title: String,
    pub seconds: f64,
    pub checks: Vec<Check>,
}

impl CriterionReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Everything a suite measured.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: Suite,
    pub options: ValidationOptions,
    pub criteria: Vec<CriterionReport>,
}

impl Report {
    pub fn checks(&self) -> impl Iterator<Item = &Check> {
        self.criteria.iter().flat_map(|c| c.checks.iter())
    }

    pub fn pass(&self) -> bool {
        self.criteria.iter().all(|c| c.pass())
    }
}

/// A short description of criterion `n`.
pub fn criterion_title(n: u8) -> &'static str {
    match n {
        1 => "Pfaffian engine",
        2 => "Pfaffian identities",
        3 => "closed form against skew-orthogonal summation",
        4 => "N = 2 exactness against quadrature",
        5 => "sum rule",
        6 => "Monte Carlo concordance for real Ginibre matrices",
        7 => "bulk limit",
        8 => "complex bulk",
        9 => "real edge",
        10 => "scaled partial sums and r_M at the edge",
        11 => "complex Ginibre",
        12 => "figure reproduction",
        _ => "unknown",
    }
}

/// Runs criterion `n` (1 to 12).
pub fn run_criterion(n: u8, options: &ValidationOptions) -> Result<CriterionReport> {
    let start = Instant::now();
    let checks = match n {
        1 => criteria::pfaffian_engine(options.seed)?,
        2 => criteria::identities(options.seed)?,
        3 => criteria::two_paths(options.seed)?,
        4 => criteria::small_n_exactness(options.seed)?,
        5 => criteria::sum_rule()?,
        6 => criteria::ginoe_concordance(options.seed, options.ginoe_samples)?,
        7 => criteria::bulk_limit()?,
        8 => criteria::complex_bulk()?,
        9 => criteria::real_edge()?,
        10 => criteria::asymptotics()?,
        11 => criteria::complex_ginibre(options.seed, options.ginue_samples)?,
        12 => criteria::figures()?,
        _ => return Err(Error::Domain(format!("criteria are numbered 1 to 12, got {n}"))),
    };
    Ok(CriterionReport {
        criterion: n,
        title: criterion_title(n).to_string(),
        seconds: start.elapsed().as_secs_f64(),
        checks,
    })
}

/// Runs every criterion of `suite`, stopping at the first hard error.
pub fn run_suite(suite: Suite, options: &ValidationOptions) -> Result<Report> {
    let criteria = suite
        .criteria()
        .iter()
        .map(|&n| run_criterion(n, options))
        .collect::<Result<Vec<_>>>()?;
    Ok(Report {
        suite,
        options: *options,
        criteria,
    })
}
