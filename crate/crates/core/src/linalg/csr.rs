use num_complex::Complex64;

use super::CMatrix;
use crate::{Error, Result};

/// Compressed sparse row matrix with complex values.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    rows: usize,
    cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<Complex64>,
}

impl CsrMatrix {
    /// Assemble from `(row, col, value)` triplets; duplicates are summed and
    /// column indices sorted within each row.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: &[(usize, usize, Complex64)],
    ) -> Result<Self> {
        let mut sorted = triplets.to_vec();
        if let Some(&(i, j, _)) = sorted.iter().find(|(i, j, _)| *i >= rows || *j >= cols) {
            return Err(Error::DimensionMismatch(format!(
                "entry ({i}, {j}) outside a {rows}x{cols} matrix"
            )));
        }
        sorted.sort_by_key(|&(i, j, _)| (i, j));
        let mut indptr = vec![0; rows + 1];
        let mut indices: Vec<usize> = Vec::with_capacity(sorted.len());
        let mut values: Vec<Complex64> = Vec::with_capacity(sorted.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in sorted {
            if last == Some((i, j)) {
                *values.last_mut().expect("previous entry exists") += v;
                continue;
            }
            indices.push(j);
            values.push(v);
            indptr[i + 1] += 1;
            last = Some((i, j));
        }
        for i in 0..rows {
            indptr[i + 1] += indptr[i];
        }
        Ok(Self {
            rows,
            cols,
            indptr,
            indices,
            values,
        })
    }

    pub fn from_dense(m: &CMatrix) -> Self {
        let mut trip = Vec::new();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let v = m[(i, j)];
                if v != Complex64::new(0.0, 0.0) {
                    trip.push((i, j, v));
                }
            }
        }
        Self::from_triplets(m.rows(), m.cols(), &trip).expect("indices are in range")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn indptr(&self) -> &[usize] {
        &self.indptr
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Iterate stored entries as `(row, col, value)`.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.rows).flat_map(move |i| {
            (self.indptr[i]..self.indptr[i + 1]).map(move |k| (i, self.indices[k], self.values[k]))
        })
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|z| z.im == 0.0)
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.rows, self.cols);
        for (i, j, v) in self.triplets() {
            m[(i, j)] += v;
        }
        m
    }

    /// `self * x` for a block of column vectors.
    pub fn matmul(&self, x: &CMatrix) -> Result<CMatrix> {
        if x.rows() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "sparse {}x{} times {}x{}",
                self.rows,
                self.cols,
                x.rows(),
                x.cols()
            )));
        }
        let mut out = CMatrix::zeros(self.rows, x.cols());
        for c in 0..x.cols() {
            let xc = x.col(c);
            let dst = out.col_mut(c);
            for (i, d) in dst.iter_mut().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in self.indptr[i]..self.indptr[i + 1] {
                    acc += self.values[k] * xc[self.indices[k]];
                }
                *d = acc;
            }
        }
        Ok(out)
    }
}
