//! Sampled convex-roof upper bounds.
//!
//! Every pure-state decomposition of `ρ = W W†`, with `W` the eigenvectors
//! scaled by `√λ`, has the form `|ψ̃_i⟩ = Σ_j U_ij |w_j⟩` for an isometry `U`
//! with orthonormal columns. Sampling `U` therefore samples decompositions,
//! and the minimum ensemble average over the samples bounds the convex roof
//! from above.
//!
//! Sample 0 is always the spectral decomposition; sample `s > 0` draws its
//! isometry from the generator for trial `s` of the given seed. A larger
//! budget only adds samples, so the bound never increases with it.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::Rng;

use super::measure::g_concurrence_raw;
use super::{EntanglementError, EntanglementResult, Exactness, Measure, MeasureValue};
use crate::quantum::{max_abs_diff, random_complex_matrix, rng_for_trial, DensityOperator, PureState};

const RANK_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoofOptions {
    /// Decompositions use between `rank` and `rank + extra_terms` states.
    pub extra_terms: usize,
}

impl Default for RoofOptions {
    fn default() -> Self {
        Self { extra_terms: 2 }
    }
}

/// One ensemble `ρ ≈ Σ p_i |ψ_i⟩⟨ψ_i|` with normalized `ψ_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionSample {
    pub probabilities: Vec<f64>,
    pub states: Vec<PureState>,
    /// Largest entrywise deviation of the reassembled operator from `ρ`.
    pub residual: f64,
}

struct Factor {
    dims: (usize, usize),
    /// Column `j` is `√λ_j |e_j⟩`.
    columns: DMatrix<C64>,
}

fn factor(rho: &DensityOperator) -> EntanglementResult<Factor> {
    let dims = rho.bipartite_dims()?;
    let (values, vectors) = rho.eigen();
    let top = values[0].max(0.0);
    if let Some(&min) = values.last() {
        if min < -1e-10 * top.max(1.0) {
            return Err(EntanglementError::NotPositive(min));
        }
    }
    let rank = values.iter().take_while(|&&v| v > RANK_TOL * top.max(f64::MIN_POSITIVE)).count().max(1);
    let columns = DMatrix::from_fn(vectors.nrows(), rank, |r, c| vectors[(r, c)] * values[c].max(0.0).sqrt());
    Ok(Factor { dims, columns })
}

/// Unnormalized ensemble members `ψ̃_i = Σ_j U_ij w_j`.
fn mix(f: &Factor, u: &DMatrix<C64>) -> Vec<nalgebra::DVector<C64>> {
    (0..u.nrows())
        .map(|i| {
            (0..u.ncols())
                .fold(nalgebra::DVector::zeros(f.columns.nrows()), |acc, j| acc + f.columns.column(j) * u[(i, j)])
        })
        .collect()
}

fn sample_isometry(f: &Factor, seed: u64, sample: usize, options: RoofOptions) -> DMatrix<C64> {
    let r = f.columns.ncols();
    if sample == 0 {
        return DMatrix::identity(r, r);
    }
    let mut rng = rng_for_trial(seed, sample as u64);
    let m = r + rng.random_range(0..=options.extra_terms);
    random_complex_matrix(&mut rng, m, r).qr().q()
}

fn average(f: &Factor, members: &[nalgebra::DVector<C64>]) -> EntanglementResult<f64> {
    members.iter().map(|v| g_concurrence_raw(&PureState::from_vector(f.dims, v.clone())?)).sum()
}

fn search(
    rho: &DensityOperator,
    measure: Measure,
    budget: usize,
    seed: u64,
    options: RoofOptions,
) -> EntanglementResult<(f64, Vec<nalgebra::DVector<C64>>, bool)> {
    if budget == 0 {
        return Err(EntanglementError::ZeroBudget);
    }
    measure.local_dim(rho.bipartite_dims()?)?;
    let f = factor(rho)?;
    let pure = f.columns.ncols() == 1;
    let mut best: Option<(f64, Vec<_>)> = None;
    let samples = if pure { 1 } else { budget };
    for s in 0..samples {
        let members = mix(&f, &sample_isometry(&f, seed, s, options));
        let value = average(&f, &members)?;
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, members));
        }
    }
    let (value, members) = best.expect("budget >= 1");
    Ok((value, members, pure))
}

/// Minimum ensemble average over `budget` sampled decompositions. Rank-one
/// inputs have a unique decomposition and return an exact value.
pub fn convex_roof_upper_bound(
    rho: &DensityOperator,
    measure: Measure,
    budget: usize,
    seed: u64,
) -> EntanglementResult<MeasureValue> {
    let (value, _, pure) = search(rho, measure, budget, seed, RoofOptions::default())?;
    let d = rho.bipartite_dims()?.0;
    let exactness = if pure { Exactness::Exact } else { Exactness::UpperBound { budget } };
    Ok(MeasureValue { value, measure: measure.id(d), exactness })
}

/// The decomposition achieving [`convex_roof_upper_bound`], with its value.
pub fn best_decomposition(
    rho: &DensityOperator,
    measure: Measure,
    budget: usize,
    seed: u64,
    options: RoofOptions,
) -> EntanglementResult<(f64, DecompositionSample)> {
    let (value, members, _) = search(rho, measure, budget, seed, options)?;
    let dims = rho.bipartite_dims()?;
    let mut probabilities = Vec::new();
    let mut states = Vec::new();
    let mut rebuilt = DMatrix::zeros(rho.matrix().nrows(), rho.matrix().ncols());
    for v in members {
        let p = v.norm_squared();
        if p <= 0.0 {
            continue;
        }
        rebuilt += &v * v.adjoint();
        probabilities.push(p);
        states.push(PureState::new(dims, v.iter().copied().collect())?);
    }
    let residual = max_abs_diff(&rebuilt, rho.matrix());
    Ok((value, DecompositionSample { probabilities, states, residual }))
}
