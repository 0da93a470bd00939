//! SL-invariant entanglement measures and the one-sided evolution law.
//!
//! Two measures are exposed:
//!
//! - the G-concurrence `C_d[ψ] = d · det([ψ]†[ψ])^{1/d}` for pure `d × d`
//!   states, and
//! - the two-qubit concurrence, which is the G-concurrence at `d = 2` and has
//!   an exact mixed-state formula (Wootters).
//!
//! Both are homogeneous: degree 2 in amplitudes, degree 1 in operators. Mixed
//! states with `d > 2` have no closed form; only sampled convex-roof upper
//! bounds are available for them and the result says so in its
//! [`Exactness`].

mod checks;
mod dual;
mod measure;
mod roof;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quantum::QuantumError;

pub use checks::{
    check_evolution_factorization, check_factorisation_lemma, check_homogeneity, check_mixed_upper_bound,
    check_sl_invariance, check_sl_invariance_with, random_local_sl, random_sl, FactorizationMode, FactorizationOptions,
};
pub use dual::{mixed_state_dual, MixedStateDual};
pub use measure::{
    concurrence2_pure, det_factor, g_concurrence_pure, g_concurrence_raw, g_concurrence_schmidt, measure_operator,
    wootters_concurrence,
};
pub use roof::{best_decomposition, convex_roof_upper_bound, DecompositionSample, RoofOptions};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EntanglementError {
    #[error("measure needs a square bipartition, got {0}x{1}")]
    NonSquare(usize, usize),

    #[error("expected local dimension {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },

    #[error("no closed form for mixed states at d = {0}; use a convex-roof upper bound")]
    NoClosedForm(usize),

    #[error("mode {mode} does not support this input: {reason}")]
    UnsupportedMode { mode: &'static str, reason: String },

    #[error("operator is not positive semidefinite (smallest eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("budget must be >= 1")]
    ZeroBudget,

    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

pub type EntanglementResult<T> = Result<T, EntanglementError>;

/// Which measure to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    GConcurrence,
    Concurrence2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureId {
    GConcurrence(usize),
    Concurrence2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exactness {
    Exact,
    UpperBound { budget: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureValue {
    pub value: f64,
    pub measure: MeasureId,
    pub exactness: Exactness,
}

impl MeasureValue {
    pub(crate) fn exact(value: f64, measure: MeasureId) -> Self {
        Self { value, measure, exactness: Exactness::Exact }
    }
}

impl Measure {
    pub(crate) fn id(self, d: usize) -> MeasureId {
        match self {
            Measure::GConcurrence => MeasureId::GConcurrence(d),
            Measure::Concurrence2 => MeasureId::Concurrence2,
        }
    }

    /// Local dimension this measure accepts for a `d_a × d_b` system.
    pub(crate) fn local_dim(self, dims: (usize, usize)) -> EntanglementResult<usize> {
        if dims.0 != dims.1 {
            return Err(EntanglementError::NonSquare(dims.0, dims.1));
        }
        if self == Measure::Concurrence2 && dims.0 != 2 {
            return Err(EntanglementError::WrongDimension { expected: 2, got: dims.0 });
        }
        Ok(dims.0)
    }
}
