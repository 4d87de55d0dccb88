//! Numerical certification of the structural identities: bracket tables,
//! Jacobi identities, Poisson maps, the dual pair, equivariance, flow
//! relatedness, involution of integrals, gradient audits, and a regression
//! table comparing printed expanded formulas with composition.
//!
//! Error model:
//! - bracket, Poisson-map and equivariance rows: `|lhs - rhs| / (1 + |rhs|)`;
//! - Jacobi: `|cyclic sum| / max(1, sum of |terms|)` with analytic derivatives
//!   of the Poisson tensor;
//! - involution: `|{F, G}| / max(1, |grad F| |grad G|)` with five-point
//!   finite-difference gradients (`h = 1e-3`), hence the looser threshold;
//! - gradient audits: `|fd - analytic| / max(1, |analytic|)` with central
//!   differences at `h = 1e-6 max(1, |x|)`.
//!
//! Every check draws from its own generator seeded by `(seed, check name)`,
//! so results do not depend on scheduling.

pub mod checks;
pub mod regression;

use crate::error::{Error, Result};
use crate::sampling::{rng_from_seed, SampleRng, SamplingBounds};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use regression::{regression_report, RegressionRow, RegressionStatus};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Brackets,
    Jacobi,
    PoissonMaps,
    DualPair,
    Equivariance,
    Relatedness,
    Involution,
    Gradients,
    Regression,
    All,
}

impl Suite {
    pub const ALL_SUITES: [Suite; 9] = [
        Suite::Brackets,
        Suite::Jacobi,
        Suite::PoissonMaps,
        Suite::DualPair,
        Suite::Equivariance,
        Suite::Relatedness,
        Suite::Involution,
        Suite::Gradients,
        Suite::Regression,
    ];

    pub fn from_name(s: &str) -> Result<Self> {
        Ok(match s {
            "brackets" => Suite::Brackets,
            "jacobi" => Suite::Jacobi,
            "poisson-maps" => Suite::PoissonMaps,
            "dual-pair" => Suite::DualPair,
            "equivariance" => Suite::Equivariance,
            "relatedness" => Suite::Relatedness,
            "involution" => Suite::Involution,
            "gradients" => Suite::Gradients,
            "regression" => Suite::Regression,
            "all" => Suite::All,
            other => return Err(Error::Usage(format!("unknown suite '{other}'"))),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Brackets => "brackets",
            Suite::Jacobi => "jacobi",
            Suite::PoissonMaps => "poisson-maps",
            Suite::DualPair => "dual-pair",
            Suite::Equivariance => "equivariance",
            Suite::Relatedness => "relatedness",
            Suite::Involution => "involution",
            Suite::Gradients => "gradients",
            Suite::Regression => "regression",
            Suite::All => "all",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub samples: usize,
    pub seed: u64,
    /// Replaces every threshold of the suite when set.
    pub tol: Option<f64>,
    pub bounds: SamplingBounds,
}

impl SuiteConfig {
    pub fn new(suite: Suite, samples: usize, seed: u64) -> Self {
        SuiteConfig {
            suite,
            samples,
            seed,
            tol: None,
            bounds: SamplingBounds::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::Usage("sample count must be at least 1".into()));
        }
        let b = &self.bounds;
        if !(b.zeta.0 >= 1e-3 && b.y.0 >= 1e-3 && b.gamma.0 >= 1e-3) {
            return Err(Error::Usage(
                "sampling bounds must stay at least 1e-3 away from the guard regions".into(),
            ));
        }
        if let Some(t) = self.tol {
            if !(t > 0.0) {
                return Err(Error::Usage(format!("tolerance must be positive, got {t}")));
            }
        }
        Ok(())
    }

    pub fn threshold(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    /// Generator for one named check.
    pub fn rng_for(&self, check: &str) -> SampleRng {
        // FNV-1a over the name, mixed with the seed
        let mut h: u64 = 0xcbf29ce484222325;
        for b in check.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        rng_from_seed(h ^ self.seed.wrapping_mul(0x9e3779b97f4a7c15))
    }
}

/// One check: `{check, residual, threshold, pass, samples, seed}` plus
/// whether it gates the suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check: String,
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
    pub samples: usize,
    pub seed: u64,
    pub gating: bool,
}

impl CheckResult {
    pub fn new(check: impl Into<String>, residual: f64, threshold: f64, samples: usize, seed: u64) -> Self {
        CheckResult {
            check: check.into(),
            residual,
            threshold,
            pass: residual.is_finite() && residual < threshold,
            samples,
            seed,
            gating: true,
        }
    }

    /// Reported but never gating.
    pub fn informational(mut self) -> Self {
        self.gating = false;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: String,
    pub seed: u64,
    pub samples: usize,
    pub pass: bool,
    pub checks: Vec<CheckResult>,
    /// Regression deviation table; empty unless the regression suite ran.
    pub regression: Vec<RegressionRow>,
}

impl VerifyReport {
    pub fn from_parts(cfg: &SuiteConfig, mut checks: Vec<CheckResult>, regression: Vec<RegressionRow>) -> Self {
        checks.sort_by(|a, b| a.check.cmp(&b.check));
        let pass = checks.iter().all(|c| c.pass || !c.gating)
            && regression.iter().all(|r| r.matches_allowlist);
        VerifyReport {
            suite: cfg.suite.name().into(),
            seed: cfg.seed,
            samples: cfg.samples,
            pass,
            checks,
            regression,
        }
    }

    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| c.gating && !c.pass).collect()
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.check == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn suite_checks(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<CheckResult>> {
    Ok(match suite {
        Suite::Brackets => checks::bracket_table_check(cfg),
        Suite::Jacobi => checks::jacobi_check(cfg),
        Suite::PoissonMaps => checks::poisson_map_check(cfg),
        Suite::DualPair => checks::dual_pair_check(cfg),
        Suite::Equivariance => checks::equivariance_suite(cfg),
        Suite::Relatedness => checks::j_relatedness_suite(cfg)?,
        Suite::Involution => checks::involution_suite(cfg),
        Suite::Gradients => checks::gradient_audit_suite(cfg),
        Suite::Regression | Suite::All => Vec::new(),
    })
}

/// Runs a suite; `all` runs every suite in parallel and merges by check name.
pub fn run_suite(cfg: &SuiteConfig) -> Result<VerifyReport> {
    cfg.validate()?;
    match cfg.suite {
        Suite::Regression => Ok(VerifyReport::from_parts(cfg, Vec::new(), regression_report(cfg))),
        Suite::All => {
            let parts: Vec<Result<Vec<CheckResult>>> = Suite::ALL_SUITES
                .par_iter()
                .filter(|s| **s != Suite::Regression)
                .map(|s| suite_checks(*s, cfg))
                .collect();
            let mut checks = Vec::new();
            for p in parts {
                checks.extend(p?);
            }
            Ok(VerifyReport::from_parts(cfg, checks, regression_report(cfg)))
        }
        s => Ok(VerifyReport::from_parts(cfg, suite_checks(s, cfg)?, Vec::new())),
    }
}

/// `|lhs - rhs| / (1 + |rhs|)`.
pub fn rel_residual(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).abs() / (1.0 + rhs.abs())
}
