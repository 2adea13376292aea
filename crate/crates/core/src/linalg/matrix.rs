use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense complex matrix in column-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Real diagonal matrix.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Build from column-major data.
    pub fn from_col_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} values for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Build from real row-major nested rows (convenient in tests).
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        if rows.iter().any(|v| v.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self::from_fn(r, c, |i, j| Complex64::new(rows[i][j], 0.0)))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn col(&self, j: usize) -> &[Complex64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [Complex64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    /// Two distinct columns borrowed mutably at once.
    pub fn col_pair_mut(&mut self, p: usize, q: usize) -> (&mut [Complex64], &mut [Complex64]) {
        assert!(p != q);
        let r = self.rows;
        if p < q {
            let (a, b) = self.data.split_at_mut(q * r);
            (&mut a[p * r..(p + 1) * r], &mut b[..r])
        } else {
            let (a, b) = self.data.split_at_mut(p * r);
            (&mut b[..r], &mut a[q * r..(q + 1) * r])
        }
    }

    /// Columns `idx` gathered into a new matrix.
    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(self.rows * idx.len());
        for &j in idx {
            data.extend_from_slice(self.col(j));
        }
        Self {
            rows: self.rows,
            cols: idx.len(),
            data,
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `self * rhs`.
    pub fn matmul(&self, rhs: &CMatrix) -> Result<CMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for j in 0..rhs.cols {
            let dst = &mut out.data[j * self.rows..(j + 1) * self.rows];
            for (k, &b) in rhs.col(j).iter().enumerate() {
                if b == ZERO {
                    continue;
                }
                for (d, &a) in dst.iter_mut().zip(self.col(k)) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `self^H * rhs` without forming the adjoint.
    pub fn adjoint_mul(&self, rhs: &CMatrix) -> Result<CMatrix> {
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "({}x{})^H times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(CMatrix::from_fn(self.cols, rhs.cols, |i, j| {
            self.col(i)
                .iter()
                .zip(rhs.col(j))
                .fold(ZERO, |acc, (a, b)| acc + a.conj() * b)
        }))
    }

    pub fn scale(&mut self, s: Complex64) {
        for z in &mut self.data {
            *z *= s;
        }
    }

    /// `self += s * other`.
    pub fn axpy(&mut self, s: Complex64, other: &CMatrix) -> Result<()> {
        self.check_same_shape(other)?;
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
        Ok(())
    }

    pub fn sub(&self, other: &CMatrix) -> Result<CMatrix> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        Ok(out)
    }

    fn check_same_shape(&self, other: &CMatrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    /// Largest `|a_ij - conj(a_ji)|` relative to the largest entry.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst: f64 = 0.0;
        for j in 0..self.cols {
            for i in 0..=j {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst / scale
    }

    /// `(self + self^H) / 2`, with an exactly real diagonal.
    pub fn hermitian_part(&self) -> CMatrix {
        CMatrix::from_fn(self.rows, self.cols, |i, j| {
            if i == j {
                Complex64::new(self[(i, i)].re, 0.0)
            } else {
                0.5 * (self[(i, j)] + self[(j, i)].conj())
            }
        })
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[j * self.rows + i]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[j * self.rows + i]
    }
}

/// Orthonormal basis of the column span (modified Gram-Schmidt, applied
/// twice). Columns whose remaining norm falls below `drop_tol` times their
/// original norm are discarded.
pub fn orthonormal_basis(m: &CMatrix, drop_tol: f64) -> CMatrix {
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for j in 0..m.cols() {
        let mut v = m.col(j).to_vec();
        let original = norm(&v);
        if original == 0.0 {
            continue;
        }
        for _ in 0..2 {
            for q in &basis {
                let c = dot(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= c * qi;
                }
            }
        }
        let n = norm(&v);
        if n > drop_tol * original {
            for vi in &mut v {
                *vi /= n;
            }
            basis.push(v);
        }
    }
    let cols = basis.len();
    CMatrix::from_col_major(m.rows(), cols, basis.concat()).expect("consistent sizes")
}

/// `sin` of the largest principal angle between the column spans of `u`
/// and `v` (both of full column rank), symmetric in its arguments.
pub fn max_principal_angle_sine(u: &CMatrix, v: &CMatrix) -> Result<f64> {
    let qu = orthonormal_basis(u, 1e-13);
    let qv = orthonormal_basis(v, 1e-13);
    if qu.cols() != qv.cols() {
        return Ok(1.0);
    }
    let one_way = |a: &CMatrix, b: &CMatrix| -> Result<f64> {
        // residual of projecting a onto span(b), kept small entrywise
        let proj = b.matmul(&b.adjoint_mul(a)?)?;
        let r = a.sub(&proj)?;
        let gram = r.adjoint_mul(&r)?;
        let eig = super::eigh::hermitian_eig(&gram)?;
        Ok(eig
            .values
            .iter()
            .fold(0.0f64, |acc, &x| acc.max(x))
            .max(0.0)
            .sqrt())
    };
    Ok(one_way(&qu, &qv)?.max(one_way(&qv, &qu)?).min(1.0))
}

pub(crate) fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).fold(ZERO, |acc, (x, y)| acc + x.conj() * y)
}

pub(crate) fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
