//! Numerical checks of the measure axioms and of the one-sided evolution law.
//!
//! Residuals are relative to `max(1, |expected|)` unless noted otherwise.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::Rng;

use super::measure::{det_factor, g_concurrence_raw, measure_operator, wootters_concurrence};
use super::roof::{best_decomposition, convex_roof_upper_bound, RoofOptions};
use super::{EntanglementError, EntanglementResult, Measure};
use crate::quantum::{
    apply_one_sided, choi_side_map, choi_state, max_abs_diff, random_complex_matrix, rng_for_trial, DensityOperator,
    Dims, KrausChannel, PureState, Side,
};
use crate::report::VerificationReport;

const SINGULAR_DET: f64 = 1e-8;

fn relative(got: f64, expected: f64) -> f64 {
    (got - expected).abs() / expected.abs().max(1.0)
}

fn pure_measure(measure: Measure, psi: &PureState) -> EntanglementResult<f64> {
    measure.local_dim(psi.dims())?;
    g_concurrence_raw(psi)
}

/// Random `n × n` matrix with determinant 1. Draws with `|det| < 1e-8` are
/// discarded; the rest are scaled by the principal `det^{-1/n}`.
pub fn random_sl<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<C64> {
    loop {
        let g = random_complex_matrix(rng, n, n);
        let det = g.clone().determinant();
        if det.norm() < SINGULAR_DET {
            continue;
        }
        return g * det.powf(-1.0 / n as f64);
    }
}

/// `g_A ⊗ g_B` with both factors drawn by [`random_sl`].
pub fn random_local_sl<R: Rng + ?Sized>(rng: &mut R, d: usize) -> DMatrix<C64> {
    let a = random_sl(rng, d);
    let b = random_sl(rng, d);
    a.kronecker(&b)
}

/// Compares `C[(M ⊗ 1)ψ]`, evaluated on the unnormalized image, with
/// `|det M|^{2/n} · C[ψ]`.
pub fn check_factorisation_lemma(
    m: &DMatrix<C64>,
    psi: &PureState,
    measure: Measure,
    tolerance: f64,
) -> EntanglementResult<VerificationReport> {
    let d = measure.local_dim(psi.dims())?;
    if m.shape() != (d, d) {
        return Err(EntanglementError::WrongDimension { expected: d, got: m.nrows().max(m.ncols()) });
    }
    let image = m.kronecker(&DMatrix::<C64>::identity(d, d)) * psi.amplitudes();
    let lhs = pure_measure(measure, &PureState::from_vector(psi.dims(), image)?)?;
    let factor = det_factor(m)?;
    let rhs = factor * pure_measure(measure, psi)?;
    let residual = relative(lhs, rhs);
    let mut report = VerificationReport::new("lemma", "pure", None);
    report.record(0, residual, tolerance, || format!("lhs {lhs:e}, rhs {rhs:e}"));
    let singular = if m.clone().determinant().norm() < SINGULAR_DET { 1.0 } else { 0.0 };
    Ok(report
        .with_value("lhs", lhs)
        .with_value("rhs", rhs)
        .with_value("det_factor", factor)
        .with_value("singular", singular))
}

/// `C[g ρ g†]` against `C[ρ]` for a random local `g` drawn from `seed`.
pub fn check_sl_invariance(
    measure: Measure,
    rho: &DensityOperator,
    seed: u64,
    tolerance: f64,
) -> EntanglementResult<VerificationReport> {
    let d = measure.local_dim(rho.bipartite_dims()?)?;
    let g = random_local_sl(&mut rng_for_trial(seed, 0), d);
    let mut report = check_sl_invariance_with(measure, rho, &g, tolerance)?;
    report.seed = Some(seed);
    Ok(report)
}

/// `C[g ρ g†]` against `C[ρ]` for a given `g`. The transformed operator is
/// rescaled to unit trace before evaluation and the scale restored
/// afterwards, which keeps badly conditioned `g` from dominating round-off.
pub fn check_sl_invariance_with(
    measure: Measure,
    rho: &DensityOperator,
    g: &DMatrix<C64>,
    tolerance: f64,
) -> EntanglementResult<VerificationReport> {
    let before = measure_operator(measure, rho)?.value;
    let moved = rho.conjugate_by(g)?;
    let t = moved.trace();
    let after = if t > 0.0 { t * measure_operator(measure, &moved.scale(1.0 / t))?.value } else { 0.0 };
    let residual = relative(after, before);
    let mut report = VerificationReport::new("sl-invariance", "operator", None);
    report.record(0, residual, tolerance, || format!("before {before:e}, after {after:e}"));
    Ok(report.with_value("before", before).with_value("after", after))
}

/// `C[r ρ]` against `r · C[ρ]`.
pub fn check_homogeneity(
    measure: Measure,
    rho: &DensityOperator,
    r: f64,
    tolerance: f64,
) -> EntanglementResult<VerificationReport> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(EntanglementError::UnsupportedMode {
            mode: "homogeneity",
            reason: format!("scale must be positive and finite, got {r}"),
        });
    }
    let base = measure_operator(measure, rho)?.value;
    let scaled = measure_operator(measure, &rho.scale(r))?.value;
    let residual = relative(scaled, r * base);
    let mut report = VerificationReport::new("homogeneity", "operator", None);
    report.record(0, residual, tolerance, || format!("C[r rho] {scaled:e}, r C[rho] {:e}", r * base));
    Ok(report.with_value("scaled", scaled).with_value("expected", r * base))
}

/// How the two sides of the evolution law are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorizationMode {
    /// Qubits, any channel; both sides exact via the Wootters formula.
    TwoQubitExact,
    /// Any `d`, a single Kraus operator, so the evolved state stays pure.
    SingleKrausPure,
    /// Any `d`, any channel; sampled upper bounds on both mixed operators.
    SampledUpperBound,
}

impl FactorizationMode {
    pub fn name(self) -> &'static str {
        match self {
            FactorizationMode::TwoQubitExact => "two-qubit-exact",
            FactorizationMode::SingleKrausPure => "single-kraus-pure",
            FactorizationMode::SampledUpperBound => "sampled-upper-bound",
        }
    }
}

impl fmt::Display for FactorizationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FactorizationMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [Self::TwoQubitExact, Self::SingleKrausPure, Self::SampledUpperBound]
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown mode '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorizationOptions {
    pub tolerance: f64,
    /// Sampled decompositions per roof in [`FactorizationMode::SampledUpperBound`].
    pub budget: usize,
    pub seed: u64,
}

impl Default for FactorizationOptions {
    fn default() -> Self {
        Self { tolerance: 1e-8, budget: 200, seed: 0 }
    }
}

fn unsupported(mode: FactorizationMode, reason: impl Into<String>) -> EntanglementError {
    EntanglementError::UnsupportedMode { mode: mode.name(), reason: reason.into() }
}

/// Compares `C[($ ⊗ 1)|ψ⟩⟨ψ|]` with `C[ρ_$] · C[ψ]`.
///
/// In [`FactorizationMode::SampledUpperBound`] neither side is known
/// exactly. The best sampled decomposition of `ρ_$` is pushed through
/// `1 ⊗ √d[ψ]ᵀ`; this is a decomposition of the evolved state whose average
/// is exactly `bound(ρ_$) · C[ψ]`, so it certifies the law in the `≤`
/// direction. The residual covers both facts. The directly sampled bound on
/// the evolved state is reported as `lhs_upper`.
pub fn check_evolution_factorization(
    c: &KrausChannel,
    psi: &PureState,
    mode: FactorizationMode,
    opts: FactorizationOptions,
) -> EntanglementResult<VerificationReport> {
    if !c.is_square() {
        return Err(unsupported(mode, format!("channel maps {} to {} dimensions", c.d_in(), c.d_out())));
    }
    let d = c.d_in();
    if psi.dims() != (d, d) {
        return Err(EntanglementError::WrongDimension { expected: d, got: psi.dims().0.max(psi.dims().1) });
    }
    let mut report = VerificationReport::new("factorization", mode.name(), None);
    let tol = opts.tolerance;
    match mode {
        FactorizationMode::TwoQubitExact => {
            if d != 2 {
                return Err(unsupported(mode, format!("needs d = 2, got {d}")));
            }
            let evolved = apply_one_sided(c, &psi.density(), Side::A)?;
            let lhs = wootters_concurrence(&evolved)?.value;
            let choi = wootters_concurrence(&choi_state(c)?)?.value;
            let state = g_concurrence_raw(psi)?;
            let rhs = choi * state;
            report.record(0, relative(lhs, rhs), tol, || format!("lhs {lhs:e}, rhs {rhs:e}"));
            Ok(report.with_value("lhs", lhs).with_value("rhs", rhs).with_value("choi", choi).with_value("state", state))
        }
        FactorizationMode::SingleKrausPure => {
            let [m] = c.operators() else {
                return Err(unsupported(mode, format!("needs one Kraus operator, got {}", c.operators().len())));
            };
            let image = m.kronecker(&DMatrix::<C64>::identity(d, d)) * psi.amplitudes();
            let lhs = g_concurrence_raw(&PureState::from_vector((d, d), image)?)?;
            let choi = measure_operator(Measure::GConcurrence, &choi_state(c)?)?.value;
            let state = g_concurrence_raw(psi)?;
            let rhs = choi * state;
            let det_path = det_factor(m)? * state;
            let residual = relative(lhs, rhs).max(relative(det_path, rhs));
            report.record(0, residual, tol, || format!("lhs {lhs:e}, rhs {rhs:e}, det path {det_path:e}"));
            Ok(report
                .with_value("lhs", lhs)
                .with_value("rhs", rhs)
                .with_value("choi", choi)
                .with_value("state", state)
                .with_value("det_path", det_path))
        }
        FactorizationMode::SampledUpperBound => {
            let choi = choi_state(c)?;
            let (choi_upper, sample) =
                best_decomposition(&choi, Measure::GConcurrence, opts.budget, opts.seed, RoofOptions::default())?;
            let state = g_concurrence_raw(psi)?;
            let rhs = choi_upper * state;
            let side = DMatrix::<C64>::identity(d, d).kronecker(&choi_side_map(psi));
            let evolved = apply_one_sided(c, &psi.density(), Side::A)?;
            let mut rebuilt = DMatrix::zeros(d * d, d * d);
            let mut pushed_average = 0.0;
            for (p, s) in sample.probabilities.iter().zip(&sample.states) {
                let v = &side * s.amplitudes() * C64::new(p.sqrt(), 0.0);
                rebuilt += &v * v.adjoint();
                pushed_average += g_concurrence_raw(&PureState::from_vector((d, d), v)?)?;
            }
            let scale = evolved.matrix().iter().map(|z| z.norm()).fold(1.0, f64::max);
            let reconstruction = max_abs_diff(&rebuilt, evolved.matrix()) / scale;
            let residual = reconstruction.max(relative(pushed_average, rhs));
            let evolved = evolved.with_dims(Dims::Bipartite(d, d))?;
            let lhs_upper = convex_roof_upper_bound(&evolved, Measure::GConcurrence, opts.budget, opts.seed)?.value;
            report.record(0, residual, tol, || {
                format!("pushed average {pushed_average:e}, rhs {rhs:e}, reconstruction {reconstruction:e}")
            });
            report.seed = Some(opts.seed);
            Ok(report
                .with_value("lhs_upper", lhs_upper)
                .with_value("pushed_average", pushed_average)
                .with_value("rhs", rhs)
                .with_value("choi", choi_upper)
                .with_value("state", state))
        }
    }
}

/// `C[($ ⊗ 1)ρ] ≤ C[ρ_$] · C[ρ]` for qubits, both sides exact. The residual
/// is the violation `max(0, lhs − rhs)`; `slack` is `rhs − lhs`.
pub fn check_mixed_upper_bound(
    c: &KrausChannel,
    rho: &DensityOperator,
    seed: u64,
    tolerance: f64,
) -> EntanglementResult<VerificationReport> {
    let dims = rho.bipartite_dims()?;
    if dims != (2, 2) || c.d_in() != 2 || c.d_out() != 2 {
        return Err(EntanglementError::WrongDimension { expected: 2, got: dims.0.max(dims.1).max(c.d_in()) });
    }
    let lhs = wootters_concurrence(&apply_one_sided(c, rho, Side::A)?)?.value;
    let choi = wootters_concurrence(&choi_state(c)?)?.value;
    let state = wootters_concurrence(rho)?.value;
    let rhs = choi * state;
    let violation = (lhs - rhs).max(0.0);
    let mut report = VerificationReport::new("upper-bound", "two-qubit-exact", Some(seed));
    report.record(0, violation, tolerance, || format!("lhs {lhs:e} exceeds rhs {rhs:e}"));
    Ok(report.with_value("lhs", lhs).with_value("rhs", rhs).with_value("slack", rhs - lhs))
}
