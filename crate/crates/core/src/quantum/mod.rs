//! Bipartite states, density operators and Kraus channels.
//!
//! Basis order is `|i⟩|j⟩` with the first factor major, so amplitude
//! `i * d_B + j` belongs to `|i⟩|j⟩` and a coefficient matrix `[ψ]` is the
//! amplitude vector reshaped row-major.
//!
//! Scale conventions:
//! - `bell_state(d)` is normalized, `Σ_k |kk⟩ / √d`.
//! - `choi_state` carries a `1/d` factor, so a trace-preserving channel has a
//!   unit-trace Choi state equal to `($ ⊗ 1)|Φ⁺⟩⟨Φ⁺|`.
//! - Pulling a matrix through the Bell state transposes it:
//!   `(M ⊗ 1)|Φ⁺⟩ = (1 ⊗ Mᵀ)|Φ⁺⟩`. The map dual to a state `ψ` acting on the B
//!   side of a Choi state is therefore `√d · [ψ]ᵀ`.

mod channel;
mod format;
mod random;
mod state;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::network::NetworkError;
use crate::tensor::TensorError;

pub use channel::{
    apply_channel, apply_channel_network, apply_one_sided, choi_side_map, choi_state, duality_evolution_identity,
    is_trace_preserving, is_unital, KrausChannel,
};
pub use format::{ChannelFile, MatrixFile, StateFile};
pub use random::{
    random_channel, random_channel_with, random_complex_matrix, random_density, random_density_with, random_pure_state,
    random_pure_state_with, rng_for_trial, TrialRng,
};
pub use state::{
    bell_state, map_from_state, schmidt, state_from_map, DensityOperator, Dims, PureState, SchmidtDecomposition,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("dimensions must be >= 1")]
    InvalidDimension,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("cannot normalize the zero state")]
    ZeroState,

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (smallest eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("density operator has trace {0}, expected 1")]
    NotNormalized(f64),

    #[error("channel has no Kraus operators")]
    EmptyChannel,

    #[error("Kraus operators must share one shape")]
    KrausShapeMismatch,

    #[error("operation needs square Kraus operators, got {rows}x{cols}")]
    NonSquareKraus { rows: usize, cols: usize },

    #[error("rank {rank} exceeds dimension {dim}")]
    RankTooLarge { rank: usize, dim: usize },

    #[error("operation needs a bipartite operator")]
    NotBipartite,

    #[error(transparent)]
    Tensor(#[from] TensorError),

    #[error(transparent)]
    Network(#[from] NetworkError),
}

pub type QuantumResult<T> = Result<T, QuantumError>;

/// Which tensor factor an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

pub(crate) fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}

pub(crate) fn identity(d: usize) -> DMatrix<C64> {
    DMatrix::identity(d, d)
}

/// Largest entrywise modulus of `a - b`; infinite on a shape mismatch.
pub fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Singular values of `m` above `threshold`.
pub fn numerical_rank(m: &DMatrix<C64>, threshold: f64) -> usize {
    m.clone().singular_values().iter().filter(|&&s| s > threshold).count()
}
