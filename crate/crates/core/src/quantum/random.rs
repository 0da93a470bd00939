//! Seeded generators. Every function either takes a seed and builds its own
//! generator or borrows one, so results never depend on call order across
//! threads.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::state::Dims;
use super::{DensityOperator, KrausChannel, PureState, QuantumError, QuantumResult};

pub type TrialRng = ChaCha8Rng;

/// Generator for trial `trial` of a campaign seeded with `seed`: the seed
/// picks the key and the trial index picks the stream.
pub fn rng_for_trial(seed: u64, trial: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Entries with independent standard normal real and imaginary parts,
/// scaled by `1/√2`.
pub fn random_complex_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<C64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re * s, im * s)
    })
}

pub fn random_pure_state(d_a: usize, d_b: usize, seed: u64) -> QuantumResult<PureState> {
    random_pure_state_with(&mut ChaCha8Rng::seed_from_u64(seed), d_a, d_b)
}

pub fn random_pure_state_with<R: Rng + ?Sized>(rng: &mut R, d_a: usize, d_b: usize) -> QuantumResult<PureState> {
    if d_a == 0 || d_b == 0 {
        return Err(QuantumError::InvalidDimension);
    }
    let v = random_complex_matrix(rng, d_a * d_b, 1);
    PureState::new((d_a, d_b), v.iter().copied().collect())
}

/// Trace-preserving channel with `k` Kraus operators, sliced from a random
/// `d·k × d` isometry.
pub fn random_channel(d: usize, k: usize, seed: u64) -> QuantumResult<KrausChannel> {
    random_channel_with(&mut ChaCha8Rng::seed_from_u64(seed), d, k)
}

pub fn random_channel_with<R: Rng + ?Sized>(rng: &mut R, d: usize, k: usize) -> QuantumResult<KrausChannel> {
    if d == 0 || k == 0 {
        return Err(QuantumError::InvalidDimension);
    }
    let isometry = random_complex_matrix(rng, d * k, d).qr().q();
    let ops = (0..k).map(|b| isometry.rows(b * d, d).into_owned()).collect();
    KrausChannel::new(ops)
}

/// `G G† / Tr(G G†)` for a random `d × rank` factor `G`.
pub fn random_density(d: usize, rank: usize, seed: u64) -> QuantumResult<DensityOperator> {
    random_density_with(&mut ChaCha8Rng::seed_from_u64(seed), Dims::Single(d), rank)
}

pub fn random_density_with<R: Rng + ?Sized>(rng: &mut R, dims: Dims, rank: usize) -> QuantumResult<DensityOperator> {
    let d = dims.total();
    if d == 0 || rank == 0 {
        return Err(QuantumError::InvalidDimension);
    }
    if rank > d {
        return Err(QuantumError::RankTooLarge { rank, dim: d });
    }
    let g = random_complex_matrix(rng, d, rank);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    Ok(DensityOperator::from_parts(dims, m.unscale(tr)))
}
