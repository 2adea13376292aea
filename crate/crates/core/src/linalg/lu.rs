use num_complex::Complex64;

use super::CMatrix;
use crate::{Error, Result};

/// Pivots below this multiple of the largest matrix entry are singular.
pub const PIVOT_TOL: f64 = 1e-14;

/// Dense LU factorization `P M = L U` with partial pivoting, stored in place.
#[derive(Debug, Clone)]
pub struct LuFactorization {
    lu: CMatrix,
    perm: Vec<usize>,
}

/// Why a factorization failed: the offending pivot and its column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularPivot {
    pub pivot: f64,
    pub column: usize,
}

impl LuFactorization {
    pub fn new(mut a: CMatrix) -> std::result::Result<Self, SingularPivot> {
        assert!(a.is_square(), "LU of a non-square matrix");
        let n = a.rows();
        let scale = a.max_abs();
        let threshold = PIVOT_TOL * scale;
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, best) = (k..n)
                .map(|i| (i, a[(i, k)].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if !(best > threshold) || scale == 0.0 {
                return Err(SingularPivot {
                    pivot: best.max(0.0),
                    column: k,
                });
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let col = a.col_mut(j);
                    col.swap(p, k);
                }
            }
            let inv = Complex64::new(1.0, 0.0) / a[(k, k)];
            for v in &mut a.col_mut(k)[k + 1..] {
                *v *= inv;
            }
            for j in k + 1..n {
                let f = a[(k, j)];
                if f == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let (ck, cj) = a.col_pair_mut(k, j);
                for (x, l) in cj[k + 1..].iter_mut().zip(&ck[k + 1..]) {
                    *x -= l * f;
                }
            }
        }
        Ok(Self { lu: a, perm })
    }

    pub fn n(&self) -> usize {
        self.lu.rows()
    }

    /// Smallest pivot magnitude, a cheap conditioning diagnostic.
    pub fn min_pivot(&self) -> f64 {
        (0..self.n())
            .map(|i| self.lu[(i, i)].norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Solve `M X = B`.
    pub fn solve(&self, b: &CMatrix) -> CMatrix {
        let n = self.n();
        assert_eq!(b.rows(), n, "right-hand side has the wrong height");
        let mut x = CMatrix::zeros(n, b.cols());
        for c in 0..b.cols() {
            let src = b.col(c);
            let col = x.col_mut(c);
            for (i, &p) in self.perm.iter().enumerate() {
                col[i] = src[p];
            }
            for k in 0..n {
                let v = col[k];
                if v == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let lk = &self.lu.col(k)[k + 1..];
                for (x, l) in col[k + 1..].iter_mut().zip(lk) {
                    *x -= l * v;
                }
            }
            for k in (0..n).rev() {
                col[k] /= self.lu[(k, k)];
                let v = col[k];
                let uk = &self.lu.col(k)[..k];
                for (x, u) in col[..k].iter_mut().zip(uk) {
                    *x -= u * v;
                }
            }
        }
        x
    }
}

/// Solve the dense system `M X = B` (convenience wrapper reporting a
/// singular matrix as a [`Error::SingularShift`] at `z = 0`).
pub fn solve_dense(m: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if !m.is_square() || m.rows() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "system {}x{} with right-hand side {}x{}",
            m.rows(),
            m.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let lu = LuFactorization::new(m.clone()).map_err(|e| Error::SingularShift {
        z: Complex64::new(0.0, 0.0),
        pivot: e.pivot,
        column: e.column,
    })?;
    Ok(lu.solve(b))
}
