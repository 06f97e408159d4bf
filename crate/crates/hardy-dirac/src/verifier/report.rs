//! Report types with a stable JSON schema and a per-trial CSV emitter.
//!
//! Field names and their order are part of the external interface; repeated
//! runs with the same configuration serialize to byte-identical JSON.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::dirac::GridSpec;

/// Which positivity criterion a [`ConditionResult`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CriterionKind {
    /// Minimum eigenvalue of the symmetrized matrix `M(r, omega)`.
    #[serde(rename = "matrix_M")]
    MatrixM,
    /// `inf (lambda_min(M_0) - 1)` for half-power pairs.
    #[serde(rename = "M0_spectrum_d")]
    M0SpectrumD,
    /// `inf ((b^-1 b' r)' - 1)` for radial weights.
    #[serde(rename = "radial_c")]
    RadialC,
    /// `inf (phi'' r + phi')` for radial phases.
    #[serde(rename = "gamma")]
    Gamma,
}

/// Evaluation of a positivity criterion over a sampled interval.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionResult {
    pub criterion: CriterionKind,
    pub sampled_interval: (f64, f64),
    pub samples: usize,
    pub value: f64,
    pub satisfied: bool,
}

impl ConditionResult {
    pub fn new(
        criterion: CriterionKind,
        sampled_interval: (f64, f64),
        samples: usize,
        value: f64,
    ) -> Self {
        ConditionResult {
            criterion,
            sampled_interval,
            samples,
            value,
            satisfied: value > 0.0,
        }
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Outcome of an inequality verification run.
#[derive(Debug, Clone, Serialize)]
pub struct InequalityReport {
    pub inequality_id: String,
    pub params: BTreeMap<String, f64>,
    pub operator: String,
    pub paper_constant: f64,
    pub observed_min_quotient: f64,
    pub observed_median_quotient: f64,
    pub num_trials: usize,
    pub grid: GridSpec,
    pub annulus: (f64, f64),
    pub seeds: Vec<u64>,
    pub slack: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub criterion: Option<ConditionResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution_doubling_delta: Option<f64>,
    pub verdict: Verdict,
    pub note: String,
}

impl InequalityReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }
}

/// A single trial: the seed that produced the test function and the observed
/// Rayleigh quotient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub quotient: f64,
}

/// CSV with the fixed column order `trial,seed,quotient`.
pub fn trials_to_csv(trials: &[TrialRecord]) -> String {
    let mut out = String::from("trial,seed,quotient\n");
    for t in trials {
        writeln!(out, "{},{},{}", t.trial, t.seed, t.quotient).expect("string write");
    }
    out
}

pub(crate) fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}
