//! Dense complex tensors with per-index variance.
//!
//! Every index carries a dimension and a variance. In the convention used
//! throughout this crate a [`Variance::Down`] index is a ket leg (an output
//! wire) and a [`Variance::Up`] index is a bra leg (an input wire), so a
//! bipartite ket `ψ_{ij}` has two `Down` indices and the identity map
//! `δ^i_j` has one of each. Contraction pairs an index of one tensor with an
//! index of opposite variance on another, exactly like joining two wires in
//! a Penrose diagram.
//!
//! Storage is flat and row-major over the index list: the last index varies
//! fastest. Operations that reorder indices physically move the data.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("invalid dimension: indices must have dimension >= 1")]
    InvalidDimension,

    #[error("data length {got} does not match the index dimensions (expected {expected})")]
    DataLength { expected: usize, got: usize },

    #[error("index {index} out of range for a rank-{rank} tensor")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("variance mismatch: paired indices must have opposite variance")]
    VarianceMismatch,

    #[error("index {0} appears more than once in the pairing")]
    RepeatedIndex(usize),

    #[error("invalid permutation of {rank} indices")]
    InvalidPermutation { rank: usize },

    #[error("shape mismatch between tensors")]
    ShapeMismatch,

    #[error("expected a rank-2 tensor, got rank {0}")]
    NotAMatrix(usize),

    #[error("tensor size overflows the addressable range")]
    TooLarge,
}

pub type TensorResult<T> = Result<T, TensorError>;

/// Position of an index: `Up` for bra legs, `Down` for ket legs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variance {
    Up,
    Down,
}

impl Variance {
    pub fn flip(self) -> Self {
        match self {
            Variance::Up => Variance::Down,
            Variance::Down => Variance::Up,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexSpec {
    dim: usize,
    variance: Variance,
    label: Option<String>,
}

impl IndexSpec {
    pub fn new(dim: usize, variance: Variance) -> TensorResult<Self> {
        if dim == 0 {
            return Err(TensorError::InvalidDimension);
        }
        Ok(Self { dim, variance, label: None })
    }

    /// An upper (bra) index.
    ///
    /// # Panics
    /// Panics if `dim == 0`.
    pub fn up(dim: usize) -> Self {
        Self::new(dim, Variance::Up).expect("index dimension must be >= 1")
    }

    /// A lower (ket) index.
    ///
    /// # Panics
    /// Panics if `dim == 0`.
    pub fn down(dim: usize) -> Self {
        Self::new(dim, Variance::Down).expect("index dimension must be >= 1")
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    fn flipped(&self) -> Self {
        Self { variance: self.variance.flip(), ..self.clone() }
    }
}

/// Comparison tolerance: `|a - b| <= abs + rel * max(|a|, |b|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { rel: 1e-10, abs: 1e-12 }
    }
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64) -> Self {
        Self { rel, abs }
    }

    pub fn close(&self, a: C64, b: C64) -> bool {
        (a - b).norm() <= self.abs + self.rel * a.norm().max(b.norm())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    indices: Vec<IndexSpec>,
    data: Vec<C64>,
}

fn product(indices: &[IndexSpec]) -> usize {
    indices.iter().map(IndexSpec::dim).product()
}

fn checked_len(indices: &[IndexSpec]) -> TensorResult<usize> {
    if indices.iter().any(|i| i.dim == 0) {
        return Err(TensorError::InvalidDimension);
    }
    indices
        .iter()
        .try_fold(1usize, |acc, i| acc.checked_mul(i.dim))
        .filter(|&n| n <= MAX_TENSOR_LEN)
        .ok_or(TensorError::TooLarge)
}

/// Upper bound on the number of entries a single tensor may hold.
pub const MAX_TENSOR_LEN: usize = 1 << 28;

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Advances a row-major multi-index; returns false once it wraps around.
fn advance(counter: &mut [usize], dims: &[usize]) -> bool {
    for k in (0..counter.len()).rev() {
        counter[k] += 1;
        if counter[k] < dims[k] {
            return true;
        }
        counter[k] = 0;
    }
    false
}

impl Tensor {
    pub fn new(indices: Vec<IndexSpec>, data: Vec<C64>) -> TensorResult<Self> {
        let expected = checked_len(&indices)?;
        if data.len() != expected {
            return Err(TensorError::DataLength { expected, got: data.len() });
        }
        Ok(Self { indices, data })
    }

    pub fn zeros(indices: Vec<IndexSpec>) -> TensorResult<Self> {
        let n = checked_len(&indices)?;
        Self::new(indices, vec![C64::new(0.0, 0.0); n])
    }

    pub fn from_fn(indices: Vec<IndexSpec>, mut f: impl FnMut(&[usize]) -> C64) -> TensorResult<Self> {
        let len = checked_len(&indices)?;
        let dims: Vec<usize> = indices.iter().map(IndexSpec::dim).collect();
        let mut data = Vec::with_capacity(len);
        let mut counter = vec![0; dims.len()];
        loop {
            data.push(f(&counter));
            if !advance(&mut counter, &dims) {
                break;
            }
        }
        Ok(Self { indices, data })
    }

    pub fn scalar(value: C64) -> Self {
        Self { indices: Vec::new(), data: vec![value] }
    }

    /// Builds a rank-2 tensor from a matrix, rows first.
    pub fn from_matrix(m: &DMatrix<C64>, row: Variance, col: Variance) -> Self {
        let data = (0..m.nrows()).flat_map(|i| (0..m.ncols()).map(move |j| (i, j))).map(|(i, j)| m[(i, j)]).collect();
        Self {
            indices: vec![
                IndexSpec::new(m.nrows(), row).expect("matrix has rows"),
                IndexSpec::new(m.ncols(), col).expect("matrix has columns"),
            ],
            data,
        }
    }

    pub fn to_matrix(&self) -> TensorResult<DMatrix<C64>> {
        if self.rank() != 2 {
            return Err(TensorError::NotAMatrix(self.rank()));
        }
        let (r, c) = (self.indices[0].dim, self.indices[1].dim);
        Ok(DMatrix::from_row_slice(r, c, &self.data))
    }

    pub fn indices(&self) -> &[IndexSpec] {
        &self.indices
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<C64> {
        self.data
    }

    pub fn dims(&self) -> Vec<usize> {
        self.indices.iter().map(IndexSpec::dim).collect()
    }

    pub fn rank(&self) -> usize {
        self.indices.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// `(upper, lower)` index counts.
    pub fn valence(&self) -> (usize, usize) {
        let up = self.indices.iter().filter(|i| i.variance == Variance::Up).count();
        (up, self.rank() - up)
    }

    pub fn is_scalar(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn scalar_value(&self) -> Option<C64> {
        self.is_scalar().then(|| self.data[0])
    }

    pub fn get(&self, position: &[usize]) -> TensorResult<C64> {
        if position.len() != self.rank() {
            return Err(TensorError::ShapeMismatch);
        }
        let mut offset = 0;
        for (k, (&p, spec)) in position.iter().zip(&self.indices).enumerate() {
            if p >= spec.dim {
                return Err(TensorError::IndexOutOfRange { index: k, rank: self.rank() });
            }
            offset = offset * spec.dim + p;
        }
        Ok(self.data[offset])
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self { indices: self.indices.clone(), data: self.data.iter().map(|z| z * factor).collect() }
    }

    pub fn with_labels<S: Into<String>>(mut self, labels: impl IntoIterator<Item = S>) -> Self {
        for (spec, label) in self.indices.iter_mut().zip(labels) {
            spec.label = Some(label.into());
        }
        self
    }

    /// True when shapes agree and every entry is within `tol`.
    pub fn approx_eq(&self, other: &Tensor, tol: Tolerance) -> bool {
        self.dims() == other.dims() && self.data.iter().zip(&other.data).all(|(a, b)| tol.close(*a, *b))
    }

    /// Largest entrywise difference divided by the largest entry modulus.
    /// Returns `f64::INFINITY` on a shape mismatch.
    pub fn max_relative_diff(&self, other: &Tensor) -> f64 {
        if self.dims() != other.dims() {
            return f64::INFINITY;
        }
        let diff = self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        let scale = self.data.iter().chain(&other.data).map(|z| z.norm()).fold(0.0, f64::max);
        if diff == 0.0 {
            0.0
        } else {
            diff / scale
        }
    }

    fn check_index(&self, index: usize) -> TensorResult<()> {
        if index >= self.rank() {
            Err(TensorError::IndexOutOfRange { index, rank: self.rank() })
        } else {
            Ok(())
        }
    }
}

/// The identity wire `δ^i_j`: indices `[Up, Down]`.
pub fn make_delta(d: usize) -> TensorResult<Tensor> {
    diagonal_pair(d, Variance::Up, Variance::Down)
}

/// Unnormalized cup: two `Up` indices, entries `δ^{ij}`.
pub fn make_cup(d: usize) -> TensorResult<Tensor> {
    diagonal_pair(d, Variance::Up, Variance::Up)
}

/// Unnormalized cap `Σ_k |kk⟩`: two `Down` indices.
pub fn make_cap(d: usize) -> TensorResult<Tensor> {
    diagonal_pair(d, Variance::Down, Variance::Down)
}

fn diagonal_pair(d: usize, first: Variance, second: Variance) -> TensorResult<Tensor> {
    let indices = vec![IndexSpec::new(d, first)?, IndexSpec::new(d, second)?];
    Tensor::from_fn(indices, |ix| if ix[0] == ix[1] { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContractOptions {
    /// Require paired indices to have opposite variance.
    pub strict_variance: bool,
}

impl Default for ContractOptions {
    fn default() -> Self {
        Self { strict_variance: true }
    }
}

/// Contracts `a` with `b` over the given `(index of a, index of b)` pairs
/// using strict variance checking. An empty pair list is the outer product.
pub fn contract(a: &Tensor, b: &Tensor, pairs: &[(usize, usize)]) -> TensorResult<Tensor> {
    contract_with(a, b, pairs, ContractOptions::default())
}

pub fn contract_with(
    a: &Tensor,
    b: &Tensor,
    pairs: &[(usize, usize)],
    options: ContractOptions,
) -> TensorResult<Tensor> {
    let mut used_a = vec![false; a.rank()];
    let mut used_b = vec![false; b.rank()];
    for &(ia, ib) in pairs {
        a.check_index(ia)?;
        b.check_index(ib)?;
        if std::mem::replace(&mut used_a[ia], true) {
            return Err(TensorError::RepeatedIndex(ia));
        }
        if std::mem::replace(&mut used_b[ib], true) {
            return Err(TensorError::RepeatedIndex(ib));
        }
        let (sa, sb) = (&a.indices[ia], &b.indices[ib]);
        if sa.dim != sb.dim {
            return Err(TensorError::DimensionMismatch { left: sa.dim, right: sb.dim });
        }
        if options.strict_variance && sa.variance == sb.variance {
            return Err(TensorError::VarianceMismatch);
        }
    }

    let free_a: Vec<usize> = (0..a.rank()).filter(|&k| !used_a[k]).collect();
    let free_b: Vec<usize> = (0..b.rank()).filter(|&k| !used_b[k]).collect();

    // a -> [free.., paired..], b -> [paired.., free..], then one matrix product
    let order_a: Vec<usize> = free_a.iter().copied().chain(pairs.iter().map(|p| p.0)).collect();
    let order_b: Vec<usize> = pairs.iter().map(|p| p.1).chain(free_b.iter().copied()).collect();
    let pa = permute(a, &order_a)?;
    let pb = permute(b, &order_b)?;

    let rows: usize = free_a.iter().map(|&k| a.indices[k].dim).product();
    let inner: usize = pairs.iter().map(|p| a.indices[p.0].dim).product();
    let cols: usize = free_b.iter().map(|&k| b.indices[k].dim).product();

    let mut out = vec![C64::new(0.0, 0.0); rows * cols];
    for r in 0..rows {
        let arow = &pa.data[r * inner..(r + 1) * inner];
        let orow = &mut out[r * cols..(r + 1) * cols];
        for (s, &av) in arow.iter().enumerate() {
            if av == C64::new(0.0, 0.0) {
                continue;
            }
            let brow = &pb.data[s * cols..(s + 1) * cols];
            for (o, &bv) in orow.iter_mut().zip(brow) {
                *o += av * bv;
            }
        }
    }

    let indices =
        free_a.iter().map(|&k| a.indices[k].clone()).chain(free_b.iter().map(|&k| b.indices[k].clone())).collect();
    Ok(Tensor { indices, data: out })
}

/// Raises or lowers one index. In the fixed computational basis the data
/// does not change.
pub fn bend(t: &Tensor, index: usize) -> TensorResult<Tensor> {
    t.check_index(index)?;
    let mut out = t.clone();
    out.indices[index] = t.indices[index].flipped();
    Ok(out)
}

/// Sums the diagonal over a pair of indices with equal dimension and
/// opposite variance.
pub fn partial_trace(t: &Tensor, pair: (usize, usize)) -> TensorResult<Tensor> {
    let (i, j) = pair;
    t.check_index(i)?;
    t.check_index(j)?;
    if i == j {
        return Err(TensorError::RepeatedIndex(i));
    }
    let (si, sj) = (&t.indices[i], &t.indices[j]);
    if si.dim != sj.dim {
        return Err(TensorError::DimensionMismatch { left: si.dim, right: sj.dim });
    }
    if si.variance == sj.variance {
        return Err(TensorError::VarianceMismatch);
    }
    let st = strides(&t.dims());
    let diag_stride = st[i] + st[j];
    let keep: Vec<usize> = (0..t.rank()).filter(|&k| k != i && k != j).collect();
    let indices: Vec<IndexSpec> = keep.iter().map(|&k| t.indices[k].clone()).collect();
    let keep_dims: Vec<usize> = indices.iter().map(IndexSpec::dim).collect();
    let keep_strides: Vec<usize> = keep.iter().map(|&k| st[k]).collect();

    let mut data = Vec::with_capacity(product(&indices));
    let mut counter = vec![0; keep.len()];
    loop {
        let base: usize = counter.iter().zip(&keep_strides).map(|(c, s)| c * s).sum();
        let sum = (0..si.dim).map(|k| t.data[base + k * diag_stride]).sum::<C64>();
        data.push(sum);
        if !advance(&mut counter, &keep_dims) {
            break;
        }
    }
    Ok(Tensor { indices, data })
}

/// Full trace of a rank-2 tensor with one upper and one lower index.
pub fn trace(t: &Tensor) -> TensorResult<C64> {
    if t.rank() != 2 {
        return Err(TensorError::NotAMatrix(t.rank()));
    }
    Ok(partial_trace(t, (0, 1))?.data[0])
}

pub fn outer(a: &Tensor, b: &Tensor) -> Tensor {
    contract(a, b, &[]).expect("outer product cannot fail")
}

/// Entrywise complex conjugate; index variances are kept.
pub fn conjugate(t: &Tensor) -> Tensor {
    Tensor { indices: t.indices.clone(), data: t.data.iter().map(|z| z.conj()).collect() }
}

/// Complex conjugate with every index bent: kets become bras.
pub fn dagger(t: &Tensor) -> Tensor {
    Tensor {
        indices: t.indices.iter().map(IndexSpec::flipped).collect(),
        data: t.data.iter().map(|z| z.conj()).collect(),
    }
}

/// Reorders indices so that result index `k` is input index `order[k]`.
pub fn permute(t: &Tensor, order: &[usize]) -> TensorResult<Tensor> {
    let rank = t.rank();
    let mut seen = vec![false; rank];
    if order.len() != rank || order.iter().any(|&k| k >= rank || std::mem::replace(&mut seen[k], true)) {
        return Err(TensorError::InvalidPermutation { rank });
    }
    if order.iter().enumerate().all(|(k, &o)| k == o) {
        return Ok(t.clone());
    }
    let old_strides = strides(&t.dims());
    let indices: Vec<IndexSpec> = order.iter().map(|&k| t.indices[k].clone()).collect();
    let dims: Vec<usize> = indices.iter().map(IndexSpec::dim).collect();
    let src_strides: Vec<usize> = order.iter().map(|&k| old_strides[k]).collect();

    let mut data = Vec::with_capacity(t.len());
    let mut counter = vec![0; rank];
    loop {
        let offset: usize = counter.iter().zip(&src_strides).map(|(c, s)| c * s).sum();
        data.push(t.data[offset]);
        if !advance(&mut counter, &dims) {
            break;
        }
    }
    Ok(Tensor { indices, data })
}

pub fn inverse_permutation(order: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; order.len()];
    for (k, &o) in order.iter().enumerate() {
        inv[o] = k;
    }
    inv
}

/// `Σ conj(a) · b` over all entries. Variances are ignored; dimensions must
/// agree index by index.
pub fn frobenius_inner(a: &Tensor, b: &Tensor) -> TensorResult<C64> {
    if a.dims() != b.dims() {
        return Err(TensorError::ShapeMismatch);
    }
    Ok(a.data.iter().zip(&b.data).map(|(x, y)| x.conj() * y).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn int_tensor(indices: Vec<IndexSpec>, seed: u64) -> Tensor {
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        Tensor::from_fn(indices, |_| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let re = ((state >> 33) % 7) as f64 - 3.0;
            let im = ((state >> 45) % 5) as f64 - 2.0;
            C64::new(re, im)
        })
        .unwrap()
    }

    #[test]
    fn delta_entries() {
        let d2 = make_delta(2).unwrap();
        assert_eq!(d2.data(), &[c(1.0), c(0.0), c(0.0), c(1.0)]);
        assert_eq!(d2.valence(), (1, 1));
        assert_eq!(make_delta(1).unwrap().data(), &[c(1.0)]);
        assert_eq!(trace(&make_delta(5).unwrap()).unwrap(), c(5.0));
    }

    #[test]
    fn zero_dimension_is_rejected() {
        assert_eq!(make_delta(0), Err(TensorError::InvalidDimension));
        assert_eq!(make_cup(0), Err(TensorError::InvalidDimension));
        assert_eq!(make_cap(0), Err(TensorError::InvalidDimension));
    }

    #[test]
    fn cap_and_cup_entries() {
        let cap = make_cap(2).unwrap();
        assert_eq!(cap.data(), &[c(1.0), c(0.0), c(0.0), c(1.0)]);
        assert_eq!(cap.valence(), (0, 2));
        let cup = make_cup(3).unwrap();
        assert_eq!(cup.valence(), (2, 0));
        assert_eq!(cup.data().iter().filter(|z| **z == c(1.0)).count(), 3);
        assert_eq!(cup.data().iter().filter(|z| **z == c(0.0)).count(), 6);
        for d in 1..6 {
            let cap = make_cap(d).unwrap();
            assert_eq!(frobenius_inner(&cap, &cap).unwrap(), c(d as f64));
        }
    }

    #[test]
    fn delta_acts_as_identity() {
        let v = Tensor::new(vec![IndexSpec::up(3)], vec![c(1.0), C64::new(2.0, -1.0), c(-4.0)]).unwrap();
        let out = contract(&make_delta(3).unwrap(), &v, &[(1, 0)]).unwrap();
        assert_eq!(out.data(), v.data());
        assert_eq!(out.indices()[0].variance(), Variance::Up);
    }

    #[test]
    fn snake_gives_delta() {
        let cup = make_cup(4).unwrap();
        let cap = make_cap(4).unwrap();
        let out = contract(&cup, &cap, &[(1, 0)]).unwrap();
        assert_eq!(out, make_delta(4).unwrap());
    }

    #[test]
    fn strict_variance_rejects_same_variance() {
        let cap = make_cap(2).unwrap();
        assert_eq!(contract(&cap, &cap, &[(0, 0)]), Err(TensorError::VarianceMismatch));
        let relaxed = contract_with(&cap, &cap, &[(0, 0)], ContractOptions { strict_variance: false }).unwrap();
        assert_eq!(relaxed.to_matrix().unwrap(), DMatrix::identity(2, 2));
    }

    #[test]
    fn contraction_errors() {
        let a = make_delta(2).unwrap();
        let b = make_delta(3).unwrap();
        assert_eq!(contract(&a, &b, &[(1, 0)]), Err(TensorError::DimensionMismatch { left: 2, right: 3 }));
        assert_eq!(contract(&a, &a, &[(2, 0)]), Err(TensorError::IndexOutOfRange { index: 2, rank: 2 }));
        assert_eq!(contract(&a, &a, &[(1, 0), (1, 0)]), Err(TensorError::RepeatedIndex(1)));
    }

    #[test]
    fn empty_pairs_is_outer_product() {
        let a = int_tensor(vec![IndexSpec::down(2)], 1);
        let b = int_tensor(vec![IndexSpec::up(3)], 2);
        let o = contract(&a, &b, &[]).unwrap();
        for i in 0..2 {
            for j in 0..3 {
                assert_eq!(o.get(&[i, j]).unwrap(), a.data()[i] * b.data()[j]);
            }
        }
    }

    #[test]
    fn bend_involution_and_cap_to_delta() {
        let t = int_tensor(vec![IndexSpec::down(2), IndexSpec::up(3), IndexSpec::down(2)], 9);
        for k in 0..3 {
            assert_eq!(bend(&bend(&t, k).unwrap(), k).unwrap(), t);
        }
        assert!(bend(&t, 3).is_err());
        // cap with its second leg bent is δ with indices [Down, Up]
        let bent = bend(&make_cap(3).unwrap(), 1).unwrap();
        let delta = make_delta(3).unwrap();
        assert_eq!(permute(&bent, &[1, 0]).unwrap(), delta);
    }

    #[test]
    fn bend_state_to_matrix() {
        // |ψ⟩ = Σ A_ij |i⟩|j⟩ with A = [[1, 2i], [3, 4]]
        let a = DMatrix::from_row_slice(2, 2, &[c(1.0), C64::new(0.0, 2.0), c(3.0), c(4.0)]);
        let psi = Tensor::from_fn(vec![IndexSpec::down(2), IndexSpec::down(2)], |ix| a[(ix[0], ix[1])]).unwrap();
        let op = bend(&psi, 1).unwrap();
        assert_eq!(op.valence(), (1, 1));
        assert_eq!(op.to_matrix().unwrap(), a);
    }

    #[test]
    fn partial_trace_errors() {
        let cap = make_cap(2).unwrap();
        assert_eq!(partial_trace(&cap, (0, 1)), Err(TensorError::VarianceMismatch));
        let t = Tensor::zeros(vec![IndexSpec::up(2), IndexSpec::down(3)]).unwrap();
        assert_eq!(partial_trace(&t, (0, 1)), Err(TensorError::DimensionMismatch { left: 2, right: 3 }));
        assert_eq!(partial_trace(&t, (0, 0)), Err(TensorError::RepeatedIndex(0)));
    }

    #[test]
    fn trace_of_projector_is_norm() {
        let psi = Tensor::new(vec![IndexSpec::down(3)], vec![C64::new(1.0, 1.0), c(2.0), C64::new(0.0, -3.0)]).unwrap();
        let rho = outer(&psi, &dagger(&psi));
        let tr = trace(&rho).unwrap();
        assert_eq!(tr, frobenius_inner(&psi, &psi).unwrap());
        assert_eq!(tr, c(15.0));
    }

    #[test]
    fn basis_projector() {
        let e0 = Tensor::new(vec![IndexSpec::down(2)], vec![c(1.0), c(0.0)]).unwrap();
        let p = outer(&e0, &conjugate(&e0));
        assert_eq!(p.data(), &[c(1.0), c(0.0), c(0.0), c(0.0)]);
    }

    #[test]
    fn permute_inverse_roundtrip() {
        let t = int_tensor(vec![IndexSpec::down(2), IndexSpec::up(3), IndexSpec::down(4)], 4);
        let order = [2, 0, 1];
        let p = permute(&t, &order).unwrap();
        assert_eq!(p.dims(), vec![4, 2, 3]);
        assert_eq!(p.get(&[3, 1, 2]).unwrap(), t.get(&[1, 2, 3]).unwrap());
        assert_eq!(permute(&p, &inverse_permutation(&order)).unwrap(), t);
        assert!(permute(&t, &[0, 0, 1]).is_err());
        assert!(permute(&t, &[0, 1]).is_err());
    }

    #[test]
    fn frobenius_shape_mismatch() {
        let a = make_delta(2).unwrap();
        let b = make_delta(3).unwrap();
        assert_eq!(frobenius_inner(&a, &b), Err(TensorError::ShapeMismatch));
    }

    #[test]
    fn data_length_is_checked() {
        let err = Tensor::new(vec![IndexSpec::up(2), IndexSpec::down(2)], vec![c(1.0); 3]);
        assert_eq!(err, Err(TensorError::DataLength { expected: 4, got: 3 }));
        let s = Tensor::new(vec![], vec![c(2.0)]).unwrap();
        assert!(s.is_scalar());
        assert_eq!(s.valence(), (0, 0));
    }
}
