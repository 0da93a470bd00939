//! Structured results of property checks.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub trial: usize,
    pub residual: f64,
    pub detail: String,
}

/// Outcome of a check over one or more trials.
///
/// Serialized field order is fixed: `check, mode, seed, trials,
/// max_residual, failures, pass`. `values` holds named diagnostic quantities
/// for in-process callers and is not serialized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub mode: String,
    pub seed: Option<u64>,
    pub trials: usize,
    pub max_residual: f64,
    pub failures: Vec<Failure>,
    pub pass: bool,
    #[serde(skip)]
    pub values: BTreeMap<String, f64>,
}

impl VerificationReport {
    pub fn new(check: impl Into<String>, mode: impl Into<String>, seed: Option<u64>) -> Self {
        Self {
            check: check.into(),
            mode: mode.into(),
            seed,
            trials: 0,
            max_residual: 0.0,
            failures: Vec::new(),
            pass: true,
            values: BTreeMap::new(),
        }
    }

    /// Records one trial. Non-finite residuals always fail and are stored
    /// as `f64::MAX` so the report stays representable in JSON.
    pub fn record(&mut self, trial: usize, residual: f64, tolerance: f64, detail: impl FnOnce() -> String) {
        self.trials += 1;
        let finite = residual.is_finite();
        let residual = if finite { residual } else { f64::MAX };
        self.max_residual = self.max_residual.max(residual);
        if !finite || residual > tolerance {
            self.pass = false;
            self.failures.push(Failure { trial, residual, detail: detail() });
        }
    }

    /// Records a trial that could not be evaluated at all.
    pub fn record_error(&mut self, trial: usize, detail: String) {
        self.trials += 1;
        self.pass = false;
        self.max_residual = f64::MAX;
        self.failures.push(Failure { trial, residual: f64::MAX, detail });
    }

    pub fn with_value(mut self, name: &str, value: f64) -> Self {
        self.values.insert(name.to_owned(), value);
        self
    }

    pub fn value(&self, name: &str) -> Option<f64> {
        self.values.get(name).copied()
    }

    /// Folds `other` into `self`, renumbering nothing: trial indices are
    /// taken as recorded.
    pub fn merge(&mut self, other: VerificationReport) {
        self.trials += other.trials;
        self.max_residual = self.max_residual.max(other.max_residual);
        self.pass &= other.pass;
        self.failures.extend(other.failures);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}
