//! Compact JSON forms used by the command line.
//!
//! - state: `{"dims": [d_a, d_b], "amplitudes": [[re, im], ...]}`, basis
//!   order `|i⟩|j⟩` with `i` major; normalized on load.
//! - channel: `{"dims": [d_out, d_in], "kraus": [op, ...]}` where each `op`
//!   is a list of rows and each row a list of `[re, im]`.
//! - matrix: `{"dims": [rows, cols], "matrix": [row, ...]}`, rows as above.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{KrausChannel, PureState, QuantumError, QuantumResult};

type Row = Vec<[f64; 2]>;

fn rows_of(m: &DMatrix<C64>) -> Vec<Row> {
    m.row_iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect()
}

fn matrix_of(rows: &[Row], shape: (usize, usize)) -> QuantumResult<DMatrix<C64>> {
    if rows.len() != shape.0 {
        return Err(QuantumError::DimensionMismatch { expected: shape.0, got: rows.len() });
    }
    if let Some(bad) = rows.iter().find(|r| r.len() != shape.1) {
        return Err(QuantumError::DimensionMismatch { expected: shape.1, got: bad.len() });
    }
    Ok(DMatrix::from_fn(shape.0, shape.1, |i, j| C64::new(rows[i][j][0], rows[i][j][1])))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: [usize; 2],
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_state(psi: &PureState) -> Self {
        let (a, b) = psi.dims();
        Self { dims: [a, b], amplitudes: psi.amplitudes().iter().map(|z| [z.re, z.im]).collect() }
    }

    pub fn into_state(self) -> QuantumResult<PureState> {
        let [a, b] = self.dims;
        let expected = a.checked_mul(b).ok_or(QuantumError::InvalidDimension)?;
        if self.amplitudes.len() != expected {
            return Err(QuantumError::DimensionMismatch { expected, got: self.amplitudes.len() });
        }
        PureState::new((a, b), self.amplitudes.into_iter().map(|[re, im]| C64::new(re, im)).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    pub dims: [usize; 2],
    pub kraus: Vec<Vec<Row>>,
}

impl ChannelFile {
    pub fn from_channel(c: &KrausChannel) -> Self {
        Self { dims: [c.d_out(), c.d_in()], kraus: c.operators().iter().map(rows_of).collect() }
    }

    pub fn into_channel(self) -> QuantumResult<KrausChannel> {
        let shape = (self.dims[0], self.dims[1]);
        let ops = self.kraus.iter().map(|op| matrix_of(op, shape)).collect::<QuantumResult<Vec<_>>>()?;
        KrausChannel::new(ops)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dims: [usize; 2],
    pub matrix: Vec<Row>,
}

impl MatrixFile {
    pub fn from_matrix(m: &DMatrix<C64>) -> Self {
        Self { dims: [m.nrows(), m.ncols()], matrix: rows_of(m) }
    }

    pub fn into_matrix(self) -> QuantumResult<DMatrix<C64>> {
        matrix_of(&self.matrix, (self.dims[0], self.dims[1]))
    }
}
