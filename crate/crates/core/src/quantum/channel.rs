use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::state::{map_from_state, Dims};
use super::{identity, kron, max_abs_diff, DensityOperator, PureState, QuantumError, QuantumResult, Side};
use crate::network::{build_network, evaluate, Edge, LegRef, NetworkNode};
use crate::report::VerificationReport;
use crate::tensor::{Tensor, Variance};

const CHANNEL_TOL: f64 = 1e-10;

/// Completely positive map `ρ ↦ Σ_k A_k ρ A_k†`, all `A_k` of shape
/// `d_out × d_in`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    operators: Vec<DMatrix<C64>>,
}

impl KrausChannel {
    pub fn new(operators: Vec<DMatrix<C64>>) -> QuantumResult<Self> {
        let first = operators.first().ok_or(QuantumError::EmptyChannel)?;
        let shape = first.shape();
        if shape.0 == 0 || shape.1 == 0 {
            return Err(QuantumError::InvalidDimension);
        }
        if operators.iter().any(|a| a.shape() != shape) {
            return Err(QuantumError::KrausShapeMismatch);
        }
        Ok(Self { operators })
    }

    pub fn identity(d: usize) -> QuantumResult<Self> {
        if d == 0 {
            return Err(QuantumError::InvalidDimension);
        }
        Self::new(vec![identity(d)])
    }

    /// Qubit amplitude damping with decay probability `gamma`.
    pub fn amplitude_damping(gamma: f64) -> Self {
        let z = C64::new(0.0, 0.0);
        let r = |x: f64| C64::new(x, 0.0);
        Self {
            operators: vec![
                DMatrix::from_row_slice(2, 2, &[r(1.0), z, z, r((1.0 - gamma).sqrt())]),
                DMatrix::from_row_slice(2, 2, &[z, r(gamma.sqrt()), z, z]),
            ],
        }
    }

    /// Complete dephasing in the computational basis, Kraus `{|k⟩⟨k|}`.
    pub fn full_dephasing(d: usize) -> QuantumResult<Self> {
        if d == 0 {
            return Err(QuantumError::InvalidDimension);
        }
        Self::new(
            (0..d)
                .map(|k| {
                    DMatrix::from_fn(
                        d,
                        d,
                        |i, j| if i == k && j == k { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) },
                    )
                })
                .collect(),
        )
    }

    pub fn operators(&self) -> &[DMatrix<C64>] {
        &self.operators
    }

    pub fn d_out(&self) -> usize {
        self.operators[0].nrows()
    }

    pub fn d_in(&self) -> usize {
        self.operators[0].ncols()
    }

    pub fn is_square(&self) -> bool {
        self.d_in() == self.d_out()
    }

    fn square_dim(&self) -> QuantumResult<usize> {
        if self.is_square() {
            Ok(self.d_in())
        } else {
            Err(QuantumError::NonSquareKraus { rows: self.d_out(), cols: self.d_in() })
        }
    }

    /// `$ ⊗ $'` with Kraus operators `A_i ⊗ B_j`.
    pub fn tensor(&self, other: &KrausChannel) -> KrausChannel {
        let operators = self.operators.iter().flat_map(|a| other.operators.iter().map(move |b| kron(a, b))).collect();
        KrausChannel { operators }
    }

    /// The channel acting on one factor of a `d_a × d_b` system.
    pub fn one_sided(&self, side: Side, other_dim: usize) -> KrausChannel {
        let id = KrausChannel { operators: vec![identity(other_dim)] };
        match side {
            Side::A => self.tensor(&id),
            Side::B => id.tensor(self),
        }
    }

    fn act(&self, m: &DMatrix<C64>) -> DMatrix<C64> {
        self.operators.iter().fold(DMatrix::zeros(self.d_out(), self.d_out()), |acc, a| acc + a * m * a.adjoint())
    }
}

/// `Σ_k A_k ρ A_k†`
pub fn apply_channel(c: &KrausChannel, rho: &DensityOperator) -> QuantumResult<DensityOperator> {
    let n = rho.dims().total();
    if n != c.d_in() {
        return Err(QuantumError::DimensionMismatch { expected: c.d_in(), got: n });
    }
    let dims = if c.is_square() { rho.dims() } else { Dims::Single(c.d_out()) };
    Ok(DensityOperator::from_parts(dims, c.act(rho.matrix())))
}

/// Applies `c` to one subsystem of a bipartite operator and the identity to
/// the other.
pub fn apply_one_sided(c: &KrausChannel, rho: &DensityOperator, side: Side) -> QuantumResult<DensityOperator> {
    let (a, b) = rho.bipartite_dims()?;
    let (acted, other) = match side {
        Side::A => (a, b),
        Side::B => (b, a),
    };
    if acted != c.d_in() {
        return Err(QuantumError::DimensionMismatch { expected: c.d_in(), got: acted });
    }
    let out = c.one_sided(side, other).act(rho.matrix());
    let dims = match side {
        Side::A => Dims::Bipartite(c.d_out(), b),
        Side::B => Dims::Bipartite(a, c.d_out()),
    };
    Ok(DensityOperator::from_parts(dims, out))
}

/// The same map evaluated as a tensor network, one `A_k ρ A_k†` chain
/// per Kraus operator.
pub fn apply_channel_network(c: &KrausChannel, rho: &DensityOperator) -> QuantumResult<DMatrix<C64>> {
    let n = rho.dims().total();
    if n != c.d_in() {
        return Err(QuantumError::DimensionMismatch { expected: c.d_in(), got: n });
    }
    let state = Tensor::from_matrix(rho.matrix(), Variance::Down, Variance::Up);
    let mut total = DMatrix::zeros(c.d_out(), c.d_out());
    for a in c.operators() {
        let g = build_network(
            vec![
                NetworkNode::dense(0, Tensor::from_matrix(a, Variance::Down, Variance::Up)),
                NetworkNode::dense(1, state.clone()),
                NetworkNode::dense(2, Tensor::from_matrix(&a.adjoint(), Variance::Down, Variance::Up)),
            ],
            vec![Edge::new(LegRef::new(0, 1), LegRef::new(1, 0)), Edge::new(LegRef::new(1, 1), LegRef::new(2, 0))],
            vec![LegRef::new(0, 0), LegRef::new(2, 1)],
        )?;
        total += evaluate(&g, None)?.to_matrix()?;
    }
    Ok(total)
}

/// `($ ⊗ 1)|Φ⁺⟩⟨Φ⁺| = (1/d) Σ_k |A_k⟩⟨A_k|` with row-major vectorization.
pub fn choi_state(c: &KrausChannel) -> QuantumResult<DensityOperator> {
    let d = c.square_dim()?;
    let mut m = DMatrix::zeros(d * d, d * d);
    for a in c.operators() {
        let v = DMatrix::from_iterator(d * d, 1, (0..d).flat_map(|i| (0..d).map(move |j| a[(i, j)])));
        m += &v * v.adjoint();
    }
    Ok(DensityOperator::from_parts(Dims::Bipartite(d, d), m.unscale(d as f64)))
}

/// `Σ_k A_k† A_k = 1`
pub fn is_trace_preserving(c: &KrausChannel) -> bool {
    let sum = c.operators().iter().fold(DMatrix::zeros(c.d_in(), c.d_in()), |acc, a| acc + a.adjoint() * a);
    max_abs_diff(&sum, &identity(c.d_in())) <= CHANNEL_TOL
}

/// `Σ_k A_k A_k† = 1`; false for non-square channels.
pub fn is_unital(c: &KrausChannel) -> bool {
    if !c.is_square() {
        return false;
    }
    let sum = c.operators().iter().fold(DMatrix::zeros(c.d_out(), c.d_out()), |acc, a| acc + a * a.adjoint());
    max_abs_diff(&sum, &identity(c.d_out())) <= CHANNEL_TOL
}

/// The matrix `√d · [ψ]ᵀ` that, acting on the B side of a Choi state,
/// reproduces `($ ⊗ 1)|ψ⟩⟨ψ|`.
pub fn choi_side_map(psi: &PureState) -> DMatrix<C64> {
    let d = psi.dims().0 as f64;
    map_from_state(psi).transpose().scale(d.sqrt())
}

/// Checks `($ ⊗ 1)|ψ⟩⟨ψ| = (1 ⊗ M) ρ_$ (1 ⊗ M†)` with `M = √d [ψ]ᵀ`.
///
/// The residual is the largest entrywise difference of the two sides.
pub fn duality_evolution_identity(
    c: &KrausChannel,
    psi: &PureState,
    tolerance: f64,
) -> QuantumResult<VerificationReport> {
    let d = c.square_dim()?;
    if psi.dims() != (d, d) {
        return Err(QuantumError::DimensionMismatch { expected: d, got: psi.dims().0.max(psi.dims().1) });
    }
    let lhs = apply_one_sided(c, &psi.density(), Side::A)?;
    let choi = choi_state(c)?;
    let side = kron(&identity(d), &choi_side_map(psi));
    let rhs = &side * choi.matrix() * side.adjoint();
    let residual = max_abs_diff(lhs.matrix(), &rhs);
    let mut report = VerificationReport::new("duality", "single", None);
    report.record(0, residual, tolerance, || format!("sides differ by {residual:e}"));
    Ok(report.with_value("lhs_trace", lhs.trace()).with_value("rhs_trace", rhs.trace().re))
}
