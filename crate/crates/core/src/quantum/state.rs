use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use super::{QuantumError, QuantumResult};
use crate::network::{build_network, LegRef, NetworkNode, NetworkResult, TensorNetworkGraph};
use crate::tensor::{IndexSpec, Tensor};

const HERMITIAN_TOL: f64 = 1e-10;
const POSITIVITY_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;

/// A pure state on `C^{d_A} ⊗ C^{d_B}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: (usize, usize),
    amplitudes: DVector<C64>,
}

impl PureState {
    /// Normalizing constructor. The zero vector is rejected.
    pub fn new(dims: (usize, usize), amplitudes: Vec<C64>) -> QuantumResult<Self> {
        let raw = Self::from_raw(dims, amplitudes)?;
        let norm = raw.amplitudes.norm();
        if norm == 0.0 {
            return Err(QuantumError::ZeroState);
        }
        Ok(Self { dims, amplitudes: raw.amplitudes.unscale(norm) })
    }

    /// Keeps the amplitudes exactly as given, normalized or not.
    pub fn from_raw(dims: (usize, usize), amplitudes: Vec<C64>) -> QuantumResult<Self> {
        if dims.0 == 0 || dims.1 == 0 {
            return Err(QuantumError::InvalidDimension);
        }
        let expected = dims.0 * dims.1;
        if amplitudes.len() != expected {
            return Err(QuantumError::DimensionMismatch { expected, got: amplitudes.len() });
        }
        Ok(Self { dims, amplitudes: DVector::from_vec(amplitudes) })
    }

    pub fn from_vector(dims: (usize, usize), amplitudes: DVector<C64>) -> QuantumResult<Self> {
        Self::from_raw(dims, amplitudes.iter().copied().collect())
    }

    /// `|i⟩|j⟩`
    pub fn basis(dims: (usize, usize), i: usize, j: usize) -> QuantumResult<Self> {
        if i >= dims.0 || j >= dims.1 {
            return Err(QuantumError::DimensionMismatch { expected: dims.0 * dims.1, got: i * dims.1 + j });
        }
        let mut amps = vec![C64::new(0.0, 0.0); dims.0 * dims.1];
        amps[i * dims.1 + j] = C64::new(1.0, 0.0);
        Self::from_raw(dims, amps)
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self { dims: self.dims, amplitudes: &self.amplitudes * factor }
    }

    /// Exchanges the two subsystems.
    pub fn swap(&self) -> Self {
        let (a, b) = self.dims;
        let amplitudes = DVector::from_fn(a * b, |k, _| {
            let (j, i) = (k / a, k % a);
            self.amplitudes[i * b + j]
        });
        Self { dims: (b, a), amplitudes }
    }

    /// `|ψ⟩⟨ψ|`, unnormalized when `ψ` is.
    pub fn projector(&self) -> DMatrix<C64> {
        &self.amplitudes * self.amplitudes.adjoint()
    }

    pub fn density(&self) -> DensityOperator {
        DensityOperator::from_parts(Dims::Bipartite(self.dims.0, self.dims.1), self.projector())
    }

    /// Rank-2 tensor with two lower (ket) indices.
    pub fn to_tensor(&self) -> Tensor {
        Tensor::new(
            vec![IndexSpec::down(self.dims.0), IndexSpec::down(self.dims.1)],
            self.amplitudes.iter().copied().collect(),
        )
        .expect("amplitude count matches dims")
    }

    /// Single-node network with both legs open.
    pub fn to_network(&self, id: usize) -> NetworkResult<TensorNetworkGraph> {
        build_network(
            vec![NetworkNode::dense(id, self.to_tensor())],
            vec![],
            vec![LegRef::new(id, 0), LegRef::new(id, 1)],
        )
    }
}

/// Normalized maximally entangled state `Σ_k |kk⟩ / √d`.
pub fn bell_state(d: usize) -> QuantumResult<PureState> {
    if d == 0 {
        return Err(QuantumError::InvalidDimension);
    }
    let amp = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    let amps = (0..d * d).map(|k| if k / d == k % d { amp } else { C64::new(0.0, 0.0) }).collect();
    PureState::from_raw((d, d), amps)
}

/// Coefficient matrix `[ψ]_{ij} = ⟨ij|ψ⟩`, of shape `d_A × d_B`.
pub fn map_from_state(psi: &PureState) -> DMatrix<C64> {
    let (a, b) = psi.dims;
    DMatrix::from_row_slice(a, b, psi.amplitudes.as_slice())
}

/// Inverse of [`map_from_state`]: amplitudes `M_{ij}` row-major, normalized
/// on request.
pub fn state_from_map(m: &DMatrix<C64>, normalize: bool) -> QuantumResult<PureState> {
    let dims = (m.nrows(), m.ncols());
    let amps: Vec<C64> = (0..dims.0).flat_map(|i| (0..dims.1).map(move |j| m[(i, j)])).collect();
    if normalize {
        PureState::new(dims, amps)
    } else {
        PureState::from_raw(dims, amps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dims {
    Single(usize),
    Bipartite(usize, usize),
}

impl Dims {
    pub fn total(&self) -> usize {
        match *self {
            Dims::Single(d) => d,
            Dims::Bipartite(a, b) => a * b,
        }
    }

    pub fn bipartite(&self) -> Option<(usize, usize)> {
        match *self {
            Dims::Bipartite(a, b) => Some((a, b)),
            Dims::Single(_) => None,
        }
    }
}

/// Hermitian positive semidefinite operator. Operators built through
/// [`DensityOperator::new`] also have unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    dims: Dims,
    matrix: DMatrix<C64>,
}

fn hermitian_deviation(m: &DMatrix<C64>) -> f64 {
    super::max_abs_diff(m, &m.adjoint())
}

impl DensityOperator {
    /// Validated, unit-trace density operator.
    pub fn new(dims: Dims, matrix: DMatrix<C64>) -> QuantumResult<Self> {
        let rho = Self::unnormalized(dims, matrix)?;
        let tr = rho.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(QuantumError::NotNormalized(tr));
        }
        Ok(rho)
    }

    /// Validated Hermitian positive operator of any trace.
    pub fn unnormalized(dims: Dims, matrix: DMatrix<C64>) -> QuantumResult<Self> {
        let n = dims.total();
        if n == 0 {
            return Err(QuantumError::InvalidDimension);
        }
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(QuantumError::DimensionMismatch { expected: n, got: matrix.nrows().max(matrix.ncols()) });
        }
        let scale = matrix.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let dev = hermitian_deviation(&matrix);
        if dev > HERMITIAN_TOL * scale {
            return Err(QuantumError::NotHermitian(dev));
        }
        let rho = Self::from_parts(dims, matrix);
        let min = rho.eigen().0.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -POSITIVITY_TOL * scale {
            return Err(QuantumError::NotPositive(min));
        }
        Ok(rho)
    }

    /// Hermitizes `matrix` without further checks; for results that are
    /// positive by construction.
    pub(crate) fn from_parts(dims: Dims, matrix: DMatrix<C64>) -> Self {
        let matrix = (&matrix + matrix.adjoint()).unscale(2.0);
        Self { dims, matrix }
    }

    pub fn maximally_mixed(dims: Dims) -> QuantumResult<Self> {
        let n = dims.total();
        if n == 0 {
            return Err(QuantumError::InvalidDimension);
        }
        Ok(Self { dims, matrix: DMatrix::identity(n, n).unscale(n as f64) })
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn bipartite_dims(&self) -> QuantumResult<(usize, usize)> {
        self.dims.bipartite().ok_or(QuantumError::NotBipartite)
    }

    /// Same matrix, reinterpreted with different subsystem dimensions.
    pub fn with_dims(&self, dims: Dims) -> QuantumResult<Self> {
        if dims.total() != self.dims.total() {
            return Err(QuantumError::DimensionMismatch { expected: self.dims.total(), got: dims.total() });
        }
        Ok(Self { dims, matrix: self.matrix.clone() })
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn is_normalized(&self) -> bool {
        (self.trace() - 1.0).abs() <= TRACE_TOL
    }

    pub fn scale(&self, r: f64) -> Self {
        Self { dims: self.dims, matrix: self.matrix.scale(r) }
    }

    /// `g ρ g†`
    pub fn conjugate_by(&self, g: &DMatrix<C64>) -> QuantumResult<Self> {
        let n = self.dims.total();
        if g.nrows() != n || g.ncols() != n {
            return Err(QuantumError::DimensionMismatch { expected: n, got: g.nrows() });
        }
        Ok(Self::from_parts(self.dims, g * &self.matrix * g.adjoint()))
    }

    /// Eigenvalues (descending) and matching eigenvector columns.
    pub fn eigen(&self) -> (Vec<f64>, DMatrix<C64>) {
        let eig = SymmetricEigen::new(self.matrix.clone());
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap_or(Ordering::Equal));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = DMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
        (values, vectors)
    }

    /// Positive square root.
    pub fn sqrt(&self) -> DMatrix<C64> {
        let (values, vectors) = self.eigen();
        let roots = DMatrix::from_diagonal(&DVector::from_iterator(
            values.len(),
            values.iter().map(|&v| C64::new(v.max(0.0).sqrt(), 0.0)),
        ));
        &vectors * roots * vectors.adjoint()
    }

    /// Number of eigenvalues above `threshold`.
    pub fn rank(&self, threshold: f64) -> usize {
        self.eigen().0.iter().filter(|&&v| v > threshold).count()
    }

    /// Traces out subsystem B.
    pub fn reduced_a(&self) -> QuantumResult<DMatrix<C64>> {
        let (a, b) = self.bipartite_dims()?;
        Ok(DMatrix::from_fn(a, a, |i, k| (0..b).map(|j| self.matrix[(i * b + j, k * b + j)]).sum()))
    }

    /// Traces out subsystem A.
    pub fn reduced_b(&self) -> QuantumResult<DMatrix<C64>> {
        let (a, b) = self.bipartite_dims()?;
        Ok(DMatrix::from_fn(b, b, |j, l| (0..a).map(|i| self.matrix[(i * b + j, i * b + l)]).sum()))
    }
}

/// `ψ = Σ_k √ω_k |u_k⟩|v_k⟩`
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtDecomposition {
    /// Squared singular values of `[ψ]`, descending.
    pub coefficients: Vec<f64>,
    /// Column `k` is `u_k`.
    pub left: DMatrix<C64>,
    /// Column `k` is `v_k`.
    pub right: DMatrix<C64>,
}

impl SchmidtDecomposition {
    pub fn reconstruct(&self) -> DVector<C64> {
        let (a, b) = (self.left.nrows(), self.right.nrows());
        let mut out = DVector::zeros(a * b);
        for (k, w) in self.coefficients.iter().enumerate() {
            let s = C64::new(w.sqrt(), 0.0);
            for i in 0..a {
                for j in 0..b {
                    out[i * b + j] += s * self.left[(i, k)] * self.right[(j, k)];
                }
            }
        }
        out
    }

    /// Number of coefficients whose singular value `√ω` exceeds `threshold`.
    pub fn rank(&self, threshold: f64) -> usize {
        self.coefficients.iter().filter(|w| w.sqrt() > threshold).count()
    }
}

pub fn schmidt(psi: &PureState) -> SchmidtDecomposition {
    let m = map_from_state(psi);
    let svd = m.svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^T");
    let sv = svd.singular_values;
    let mut order: Vec<usize> = (0..sv.len()).collect();
    // stable: equal values keep their original order
    order.sort_by(|&x, &y| sv[y].partial_cmp(&sv[x]).unwrap_or(Ordering::Equal));
    SchmidtDecomposition {
        coefficients: order.iter().map(|&k| sv[k] * sv[k]).collect(),
        left: DMatrix::from_fn(u.nrows(), order.len(), |r, c| u[(r, order[c])]),
        right: DMatrix::from_fn(v_t.ncols(), order.len(), |r, c| v_t[(order[c], r)]),
    }
}
