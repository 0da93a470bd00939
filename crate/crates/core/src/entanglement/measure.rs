use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use super::{EntanglementError, EntanglementResult, Measure, MeasureId, MeasureValue};
use crate::quantum::{map_from_state, schmidt, DensityOperator, PureState};

/// Eigenvalues below this fraction of the largest count as zero when
/// deciding whether an operator is rank one.
const RANK_ONE_TOL: f64 = 1e-12;

/// A coefficient matrix whose smallest singular value is at most this
/// fraction of its largest is treated as Schmidt-rank deficient. Below it the
/// computed singular value is round-off, which the `1/d` power would
/// otherwise inflate (to ~1e-5 for a product state at `d = 6`).
const SCHMIDT_GATE: f64 = 1e-13;

fn schmidt_deficient(singular_values: &[f64]) -> bool {
    let max = singular_values.iter().copied().fold(0.0, f64::max);
    let min = singular_values.iter().copied().fold(f64::INFINITY, f64::min);
    max == 0.0 || min <= SCHMIDT_GATE * max
}

/// `|det M|^{2/n}` for an `n × n` matrix.
pub fn det_factor(m: &DMatrix<C64>) -> EntanglementResult<f64> {
    if !m.is_square() {
        return Err(EntanglementError::NonSquare(m.nrows(), m.ncols()));
    }
    let n = m.nrows() as f64;
    Ok(m.clone().determinant().norm().powf(2.0 / n))
}

/// `d · det([ψ]†[ψ])^{1/d}` on the amplitudes exactly as given.
///
/// `det([ψ]†[ψ]) = |det [ψ]|²`, so the value is real and nonnegative without
/// any clamping. Numerically Schmidt-rank-deficient states give exactly 0.
pub fn g_concurrence_raw(psi: &PureState) -> EntanglementResult<f64> {
    let (a, b) = psi.dims();
    if a != b {
        return Err(EntanglementError::NonSquare(a, b));
    }
    let m = map_from_state(psi);
    if schmidt_deficient(m.singular_values().as_slice()) {
        return Ok(0.0);
    }
    Ok(a as f64 * det_factor(&m)?)
}

pub fn g_concurrence_pure(psi: &PureState) -> EntanglementResult<MeasureValue> {
    let d = psi.dims().0;
    Ok(MeasureValue::exact(g_concurrence_raw(psi)?, MeasureId::GConcurrence(d)))
}

/// `d · Π_k ω_k^{1/d}` from the Schmidt coefficients.
pub fn g_concurrence_schmidt(psi: &PureState) -> EntanglementResult<f64> {
    let (a, b) = psi.dims();
    if a != b {
        return Err(EntanglementError::NonSquare(a, b));
    }
    let d = a as f64;
    let s = schmidt(psi);
    let singular: Vec<f64> = s.coefficients.iter().map(|w| w.max(0.0).sqrt()).collect();
    if schmidt_deficient(&singular) {
        return Ok(0.0);
    }
    Ok(d * s.coefficients.iter().map(|w| w.max(0.0).powf(1.0 / d)).product::<f64>())
}

/// `2 |det [ψ]|` for two qubits.
pub fn concurrence2_pure(psi: &PureState) -> EntanglementResult<MeasureValue> {
    Measure::Concurrence2.local_dim(psi.dims())?;
    Ok(MeasureValue::exact(g_concurrence_raw(psi)?, MeasureId::Concurrence2))
}

fn sigma_yy() -> DMatrix<C64> {
    let z = C64::new(0.0, 0.0);
    let p = C64::new(1.0, 0.0);
    DMatrix::from_row_slice(4, 4, &[z, z, z, -p, z, z, p, z, z, p, z, z, -p, z, z, z])
}

/// Wootters concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)` of a two-qubit operator.
///
/// The `λ_i` are the square roots of the eigenvalues of `ρ (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`,
/// obtained as the singular values of `√ρ (σ_y⊗σ_y) √ρ*`. Homogeneous of
/// degree 1, so unnormalized operators are accepted.
pub fn wootters_concurrence(rho: &DensityOperator) -> EntanglementResult<MeasureValue> {
    let dims = rho.bipartite_dims()?;
    if dims != (2, 2) {
        return Err(EntanglementError::WrongDimension { expected: 2, got: dims.0.max(dims.1) });
    }
    let s = rho.sqrt();
    let m = &s * sigma_yy() * s.map(|z| z.conj());
    let mut lambda: Vec<f64> = m.singular_values().iter().copied().collect();
    lambda.sort_by(|x, y| y.total_cmp(x));
    let value = (lambda[0] - lambda[1] - lambda[2] - lambda[3]).max(0.0);
    Ok(MeasureValue::exact(value, MeasureId::Concurrence2))
}

/// Exact measure of a bipartite operator where one exists: rank-one
/// operators use the pure formula on their (unnormalized) eigenvector,
/// mixed two-qubit operators use Wootters. Mixed `d > 2` is an error.
pub fn measure_operator(measure: Measure, rho: &DensityOperator) -> EntanglementResult<MeasureValue> {
    let dims = rho.bipartite_dims()?;
    let d = measure.local_dim(dims)?;
    let (values, vectors) = rho.eigen();
    let top = values[0].max(0.0);
    let rank_one = values.iter().skip(1).all(|&v| v <= RANK_ONE_TOL * top.max(f64::MIN_POSITIVE));
    if top == 0.0 {
        return Ok(MeasureValue::exact(0.0, measure.id(d)));
    }
    if rank_one {
        let v: DVector<C64> = vectors.column(0).into_owned() * C64::new(top.sqrt(), 0.0);
        let psi = PureState::from_vector(dims, v)?;
        return Ok(MeasureValue::exact(g_concurrence_raw(&psi)?, measure.id(d)));
    }
    if d == 2 {
        let c = wootters_concurrence(rho)?;
        return Ok(MeasureValue::exact(c.value, measure.id(d)));
    }
    Err(EntanglementError::NoClosedForm(d))
}
