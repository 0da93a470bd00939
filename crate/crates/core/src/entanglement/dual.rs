//! The superoperator obtained by bending every term of a spectral
//! decomposition into a map.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::{EntanglementError, EntanglementResult};
use crate::quantum::{map_from_state, DensityOperator, Dims, KrausChannel, PureState, QuantumError, Side};

/// `X ↦ Σ_k p_k A_k X A_k†` with `A_k = √d·[ψ_k]` from `ρ = Σ_k p_k |ψ_k⟩⟨ψ_k|`.
///
/// Applied on side A of `|Φ⁺⟩⟨Φ⁺|` it returns `ρ`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedStateDual {
    dim: usize,
    terms: Vec<(f64, DMatrix<C64>)>,
}

impl MixedStateDual {
    /// Builds the dual of a square bipartite operator given as a raw
    /// `d² × d²` matrix. The matrix must be Hermitian and positive.
    pub fn from_matrix(d: usize, m: DMatrix<C64>) -> EntanglementResult<Self> {
        let rho = DensityOperator::unnormalized(Dims::Bipartite(d, d), m).map_err(|e| match e {
            QuantumError::NotPositive(v) => EntanglementError::NotPositive(v),
            other => other.into(),
        })?;
        mixed_state_dual(&rho)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `(p_k, A_k)` pairs.
    pub fn terms(&self) -> &[(f64, DMatrix<C64>)] {
        &self.terms
    }

    /// The same map as a Kraus channel with operators `√p_k A_k`.
    pub fn kraus(&self) -> EntanglementResult<KrausChannel> {
        let ops = self.terms.iter().map(|(p, a)| a.scale(p.sqrt())).collect();
        Ok(KrausChannel::new(ops)?)
    }

    /// Applies the map to one factor of a `d × d` bipartite operator.
    pub fn apply(&self, x: &DMatrix<C64>, side: Side) -> EntanglementResult<DMatrix<C64>> {
        let n = self.dim * self.dim;
        if x.shape() != (n, n) {
            return Err(EntanglementError::WrongDimension { expected: n, got: x.nrows().max(x.ncols()) });
        }
        let id = DMatrix::<C64>::identity(self.dim, self.dim);
        let mut out = DMatrix::zeros(n, n);
        for (p, a) in &self.terms {
            let full = match side {
                Side::A => a.kronecker(&id),
                Side::B => id.kronecker(a),
            };
            out += (&full * x * full.adjoint()).scale(*p);
        }
        Ok(out)
    }
}

/// Spectral decomposition of `ρ` with every eigenvector bent into a map.
/// Zero eigenvalues are dropped; degenerate eigenspaces use whatever basis
/// the eigensolver returns.
pub fn mixed_state_dual(rho: &DensityOperator) -> EntanglementResult<MixedStateDual> {
    let (a, b) = rho.bipartite_dims()?;
    if a != b {
        return Err(EntanglementError::NonSquare(a, b));
    }
    let (values, vectors) = rho.eigen();
    let top = values[0].max(0.0);
    if let Some(&min) = values.last() {
        if min < -1e-10 * top.max(1.0) {
            return Err(EntanglementError::NotPositive(min));
        }
    }
    let root_d = (a as f64).sqrt();
    let mut terms = Vec::new();
    for (k, &p) in values.iter().enumerate() {
        if p <= 1e-14 * top.max(f64::MIN_POSITIVE) {
            continue;
        }
        let psi = PureState::from_vector((a, a), vectors.column(k).into_owned())?;
        terms.push((p, map_from_state(&psi).scale(root_d)));
    }
    if terms.is_empty() {
        terms.push((0.0, DMatrix::zeros(a, a)));
    }
    Ok(MixedStateDual { dim: a, terms })
}
