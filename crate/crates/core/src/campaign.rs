//! Seeded verification campaigns.
//!
//! Trial `t` of a campaign with seed `s` draws everything from
//! `rng_for_trial(s, t)`, so a trial's outcome does not depend on which
//! thread runs it or in which order. Outcomes are collected by trial index
//! before the report is assembled.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::entanglement::{
    check_evolution_factorization, check_factorisation_lemma, check_homogeneity, check_mixed_upper_bound,
    check_sl_invariance_with, random_local_sl, FactorizationMode, FactorizationOptions, Measure,
};
use crate::quantum::{
    apply_one_sided, bell_state, choi_state, duality_evolution_identity, max_abs_diff, random_channel_with,
    random_complex_matrix, random_density_with, random_pure_state_with, rng_for_trial, Dims, KrausChannel, Side,
    TrialRng,
};
use crate::report::VerificationReport;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "ENT_EVOLVE_THREADS";

/// Largest local dimension a campaign accepts.
pub const MAX_DIM: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CampaignError {
    #[error("trials must be >= 1")]
    ZeroTrials,

    #[error("unknown check '{0}'")]
    UnknownCheck(String),

    #[error("check {check} does not support dimension {dim}")]
    UnsupportedDimension { check: Check, dim: usize },

    #[error("check {check} does not take a mode")]
    UnexpectedMode { check: Check },

    #[error("tolerance must be finite and >= 0, got {0}")]
    InvalidTolerance(f64),

    #[error("budget must be >= 1")]
    ZeroBudget,

    #[error("invalid {THREADS_ENV} value '{0}'")]
    InvalidThreads(String),

    #[error("thread pool: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Check {
    Factorization,
    UpperBound,
    Duality,
    SlInvariance,
    Lemma,
    Choi,
}

impl Check {
    pub const ALL: [Check; 6] =
        [Check::Factorization, Check::UpperBound, Check::Duality, Check::SlInvariance, Check::Lemma, Check::Choi];

    pub fn name(self) -> &'static str {
        match self {
            Check::Factorization => "factorization",
            Check::UpperBound => "upper-bound",
            Check::Duality => "duality",
            Check::SlInvariance => "sl-invariance",
            Check::Lemma => "lemma",
            Check::Choi => "choi",
        }
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            Check::Factorization | Check::SlInvariance | Check::Lemma => 1e-8,
            Check::UpperBound | Check::Duality | Check::Choi => 1e-10,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = CampaignError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Check::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| CampaignError::UnknownCheck(s.to_owned()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignConfig {
    pub check: Check,
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    /// Only meaningful for [`Check::Factorization`]; defaults to the exact
    /// qubit mode at `d = 2` and the single-Kraus mode otherwise.
    pub mode: Option<FactorizationMode>,
    pub tolerance: Option<f64>,
    /// Sampled decompositions per roof in the sampled mode.
    pub budget: usize,
}

impl CampaignConfig {
    pub fn new(check: Check, dim: usize, trials: usize, seed: u64) -> Self {
        Self { check, dim, trials, seed, mode: None, tolerance: None, budget: 100 }
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance.unwrap_or(self.check.default_tolerance())
    }

    fn factorization_mode(&self) -> FactorizationMode {
        self.mode.unwrap_or(if self.dim == 2 {
            FactorizationMode::TwoQubitExact
        } else {
            FactorizationMode::SingleKrausPure
        })
    }

    /// Label written to the report's `mode` field.
    pub fn mode_name(&self) -> &'static str {
        match self.check {
            Check::Factorization => self.factorization_mode().name(),
            Check::UpperBound => "two-qubit-exact",
            Check::Duality => "single",
            Check::SlInvariance => "operator",
            Check::Lemma => "pure",
            Check::Choi => "kraus",
        }
    }

    pub fn validate(&self) -> Result<(), CampaignError> {
        if self.trials == 0 {
            return Err(CampaignError::ZeroTrials);
        }
        if self.budget == 0 {
            return Err(CampaignError::ZeroBudget);
        }
        if let Some(t) = self.tolerance {
            if !(t.is_finite() && t >= 0.0) {
                return Err(CampaignError::InvalidTolerance(t));
            }
        }
        if self.mode.is_some() && self.check != Check::Factorization {
            return Err(CampaignError::UnexpectedMode { check: self.check });
        }
        let bad = CampaignError::UnsupportedDimension { check: self.check, dim: self.dim };
        if !(2..=MAX_DIM).contains(&self.dim) {
            return Err(bad);
        }
        let qubits_only = match self.check {
            Check::UpperBound => true,
            Check::Factorization => self.factorization_mode() == FactorizationMode::TwoQubitExact,
            _ => false,
        };
        if qubits_only && self.dim != 2 {
            return Err(bad);
        }
        Ok(())
    }
}

/// One row of a campaign: the residual of a single trial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub trial: usize,
    pub residual: f64,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignResult {
    pub report: VerificationReport,
    pub outcomes: Vec<TrialOutcome>,
}

impl CampaignResult {
    /// Header plus one row per trial.
    pub fn to_csv(&self) -> String {
        let r = &self.report;
        let seed = r.seed.map(|s| s.to_string()).unwrap_or_default();
        let mut out = String::from("check,mode,seed,trial,residual,pass\n");
        for o in &self.outcomes {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.check,
                r.mode,
                seed,
                o.trial,
                fmt_float(o.residual),
                o.pass
            ));
        }
        out
    }
}

/// Shortest representation that parses back to the same value; identical
/// to the JSON output.
fn fmt_float(x: f64) -> String {
    serde_json::to_string(&x).expect("finite floats serialize")
}

/// Worker count from [`THREADS_ENV`], or `None` to use rayon's default.
pub fn threads_from_env() -> Result<Option<usize>, CampaignError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(CampaignError::InvalidThreads(v)),
        },
    }
}

/// Runs a campaign with the worker count taken from the environment.
pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignResult, CampaignError> {
    run_campaign_with_threads(config, threads_from_env()?)
}

pub fn run_campaign_with_threads(
    config: &CampaignConfig,
    threads: Option<usize>,
) -> Result<CampaignResult, CampaignError> {
    config.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CampaignError::ThreadPool(e.to_string()))?;
    let outcomes: Vec<TrialOutcome> =
        pool.install(|| (0..config.trials).into_par_iter().map(|t| run_trial(config, t)).collect());

    let mut report = VerificationReport::new(config.check.name(), config.mode_name(), Some(config.seed));
    let tolerance = config.tolerance();
    for o in &outcomes {
        if o.residual.is_nan() {
            report.record_error(o.trial, o.detail.clone());
        } else {
            report.record(o.trial, o.residual, tolerance, || o.detail.clone());
        }
    }
    Ok(CampaignResult { report, outcomes })
}

fn run_trial(config: &CampaignConfig, trial: usize) -> TrialOutcome {
    let mut rng = rng_for_trial(config.seed, trial as u64);
    let tolerance = config.tolerance();
    match trial_report(config, &mut rng, tolerance) {
        Ok(report) => TrialOutcome {
            trial,
            residual: report.max_residual,
            pass: report.pass,
            detail: report.failures.into_iter().map(|f| f.detail).collect::<Vec<_>>().join("; "),
        },
        Err(e) => TrialOutcome { trial, residual: f64::NAN, pass: false, detail: e },
    }
}

fn kraus_count(rng: &mut TrialRng) -> usize {
    rng.random_range(1..=4)
}

fn nonsingular(rng: &mut TrialRng, d: usize) -> DMatrix<C64> {
    loop {
        let m = random_complex_matrix(rng, d, d);
        if m.clone().determinant().norm() > 1e-6 {
            return m;
        }
    }
}

fn trial_report(config: &CampaignConfig, rng: &mut TrialRng, tolerance: f64) -> Result<VerificationReport, String> {
    let d = config.dim;
    let err = |e: &dyn fmt::Display| e.to_string();
    match config.check {
        Check::Factorization => {
            let mode = config.factorization_mode();
            let channel = match mode {
                FactorizationMode::SingleKrausPure => {
                    KrausChannel::new(vec![nonsingular(rng, d)]).map_err(|e| err(&e))?
                }
                _ => {
                    let k = kraus_count(rng);
                    random_channel_with(rng, d, k).map_err(|e| err(&e))?
                }
            };
            let psi = random_pure_state_with(rng, d, d).map_err(|e| err(&e))?;
            let seed = rng.random();
            let opts = FactorizationOptions { tolerance, budget: config.budget, seed };
            check_evolution_factorization(&channel, &psi, mode, opts).map_err(|e| err(&e))
        }
        Check::UpperBound => {
            let k = kraus_count(rng);
            let channel = random_channel_with(rng, 2, k).map_err(|e| err(&e))?;
            let rank = rng.random_range(1..=4);
            let rho = random_density_with(rng, Dims::Bipartite(2, 2), rank).map_err(|e| err(&e))?;
            check_mixed_upper_bound(&channel, &rho, config.seed, tolerance).map_err(|e| err(&e))
        }
        Check::Duality => {
            let k = kraus_count(rng);
            let channel = random_channel_with(rng, d, k).map_err(|e| err(&e))?;
            let psi = random_pure_state_with(rng, d, d).map_err(|e| err(&e))?;
            duality_evolution_identity(&channel, &psi, tolerance).map_err(|e| err(&e))
        }
        Check::SlInvariance => {
            // Mixed inputs only have an exact measure for qubits.
            let rank = if d == 2 { rng.random_range(1..=4) } else { 1 };
            let rho = random_density_with(rng, Dims::Bipartite(d, d), rank).map_err(|e| err(&e))?;
            let measure = Measure::GConcurrence;
            let g = random_local_sl(rng, d);
            let mut report = check_sl_invariance_with(measure, &rho, &g, tolerance).map_err(|e| err(&e))?;
            for r in [0.5, 2.0, 10.0] {
                report.merge(check_homogeneity(measure, &rho, r, tolerance).map_err(|e| err(&e))?);
            }
            Ok(report)
        }
        Check::Lemma => {
            let m = nonsingular(rng, d);
            let psi = random_pure_state_with(rng, d, d).map_err(|e| err(&e))?;
            check_factorisation_lemma(&m, &psi, Measure::GConcurrence, tolerance).map_err(|e| err(&e))
        }
        Check::Choi => {
            let k = kraus_count(rng);
            let channel = random_channel_with(rng, d, k).map_err(|e| err(&e))?;
            let choi = choi_state(&channel).map_err(|e| err(&e))?;
            let direct = apply_one_sided(&channel, &bell_state(d).map_err(|e| err(&e))?.density(), Side::A)
                .map_err(|e| err(&e))?;
            let residual = max_abs_diff(choi.matrix(), direct.matrix()).max((choi.trace() - 1.0).abs());
            let mut report = VerificationReport::new("choi", "kraus", None);
            report.record(0, residual, tolerance, || format!("Choi state off by {residual:e}"));
            Ok(report)
        }
    }
}
