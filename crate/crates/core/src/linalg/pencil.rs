use num_complex::Complex64;

use super::lu::LuFactorization;
use super::{CMatrix, CsrMatrix};
use crate::{Error, Result};

/// Tolerance on `A = A^H`, relative to the largest stored entry.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Required relative residual of a shifted solve.
pub const SOLVE_RESIDUAL_TOL: f64 = 1e-10;

/// Dense or sparse storage of one pencil matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum Operator {
    Dense(CMatrix),
    Sparse(CsrMatrix),
}

impl Operator {
    pub fn rows(&self) -> usize {
        match self {
            Operator::Dense(m) => m.rows(),
            Operator::Sparse(m) => m.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            Operator::Dense(m) => m.cols(),
            Operator::Sparse(m) => m.cols(),
        }
    }

    pub fn apply(&self, x: &CMatrix) -> Result<CMatrix> {
        match self {
            Operator::Dense(m) => m.matmul(x),
            Operator::Sparse(m) => m.matmul(x),
        }
    }

    pub fn to_dense(&self) -> CMatrix {
        match self {
            Operator::Dense(m) => m.clone(),
            Operator::Sparse(m) => m.to_dense(),
        }
    }

    pub fn is_real(&self) -> bool {
        match self {
            Operator::Dense(m) => m.is_real(),
            Operator::Sparse(m) => m.is_real(),
        }
    }
}

impl From<CMatrix> for Operator {
    fn from(m: CMatrix) -> Self {
        Operator::Dense(m)
    }
}

impl From<CsrMatrix> for Operator {
    fn from(m: CsrMatrix) -> Self {
        Operator::Sparse(m)
    }
}

/// Hermitian pencil `(A, B)` with `B` positive definite. `b = None` stands
/// for the identity.
#[derive(Debug, Clone)]
pub struct HermitianPencil {
    a: Operator,
    b: Option<Operator>,
    real_symmetric: bool,
}

impl HermitianPencil {
    /// Validate and build. `A` and `B` must be square, of equal size,
    /// Hermitian to [`HERMITIAN_TOL`], and `B` must admit a Cholesky
    /// factorization.
    pub fn new(a: impl Into<Operator>, b: Option<Operator>) -> Result<Self> {
        let a = a.into();
        let n = a.rows();
        if a.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "A is {}x{}, not square",
                n,
                a.cols()
            )));
        }
        if n == 0 {
            return Err(Error::DimensionMismatch("empty pencil".into()));
        }
        let defect = a.to_dense().hermitian_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(format!(
                "A has relative defect {defect:e}"
            )));
        }
        if let Some(b) = &b {
            if b.rows() != n || b.cols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "B is {}x{} but A is {n}x{n}",
                    b.rows(),
                    b.cols()
                )));
            }
            let dense = b.to_dense();
            let defect = dense.hermitian_defect();
            if defect > HERMITIAN_TOL {
                return Err(Error::NotHermitian(format!(
                    "B has relative defect {defect:e}"
                )));
            }
            check_positive_definite(&dense)?;
        }
        let real_symmetric = a.is_real() && b.as_ref().is_none_or(|b| b.is_real());
        Ok(Self {
            a,
            b,
            real_symmetric,
        })
    }

    /// Standard problem `A x = lambda x`.
    pub fn standard(a: impl Into<Operator>) -> Result<Self> {
        Self::new(a, None)
    }

    /// Diagonal standard pencil, handy for synthetic spectra.
    pub fn diagonal(eigenvalues: &[f64]) -> Result<Self> {
        let trip: Vec<_> = eigenvalues
            .iter()
            .enumerate()
            .map(|(i, &v)| (i, i, Complex64::new(v, 0.0)))
            .collect();
        let n = eigenvalues.len();
        Self::standard(CsrMatrix::from_triplets(n, n, &trip)?)
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn a(&self) -> &Operator {
        &self.a
    }

    pub fn b(&self) -> Option<&Operator> {
        self.b.as_ref()
    }

    /// True when both matrices are real (hence real symmetric).
    pub fn real_symmetric(&self) -> bool {
        self.real_symmetric
    }

    pub fn apply_a(&self, x: &CMatrix) -> Result<CMatrix> {
        self.a.apply(x)
    }

    pub fn apply_b(&self, x: &CMatrix) -> Result<CMatrix> {
        match &self.b {
            Some(b) => b.apply(x),
            None => {
                if x.rows() != self.n() {
                    return Err(Error::DimensionMismatch(format!(
                        "identity of size {} applied to {} rows",
                        self.n(),
                        x.rows()
                    )));
                }
                Ok(x.clone())
            }
        }
    }

    pub fn dense_a(&self) -> CMatrix {
        self.a.to_dense()
    }

    pub fn dense_b(&self) -> CMatrix {
        match &self.b {
            Some(b) => b.to_dense(),
            None => CMatrix::identity(self.n()),
        }
    }

    /// `z B - A` as a dense matrix.
    pub fn shifted_dense(&self, z: Complex64) -> CMatrix {
        let mut m = self.dense_b();
        m.scale(z);
        let a = self.dense_a();
        for (x, y) in m.data_mut().iter_mut().zip(a.data()) {
            *x -= y;
        }
        m
    }

    /// `(z B - A) X`, applied through the stored operators.
    pub fn apply_shifted(&self, z: Complex64, x: &CMatrix) -> Result<CMatrix> {
        let mut out = self.apply_b(x)?;
        out.scale(z);
        let ax = self.apply_a(x)?;
        for (o, a) in out.data_mut().iter_mut().zip(ax.data()) {
            *o -= a;
        }
        Ok(out)
    }
}

fn check_positive_definite(b: &CMatrix) -> Result<()> {
    let n = b.rows();
    let mut l = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = b[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) {
            return Err(Error::NotPositiveDefinite {
                pivot: d,
                column: j,
            });
        }
        let djj = d.sqrt();
        l[(j, j)] = Complex64::new(djj, 0.0);
        for i in j + 1..n {
            let mut s = b[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / djj;
        }
    }
    Ok(())
}

/// Factorization of `z B - A` for repeated solves.
#[derive(Debug, Clone)]
pub struct ShiftedSystem {
    z: Complex64,
    lu: LuFactorization,
}

impl ShiftedSystem {
    pub fn factor(pencil: &HermitianPencil, z: Complex64) -> Result<Self> {
        let lu =
            LuFactorization::new(pencil.shifted_dense(z)).map_err(|e| Error::SingularShift {
                z,
                pivot: e.pivot,
                column: e.column,
            })?;
        Ok(Self { z, lu })
    }

    pub fn shift(&self) -> Complex64 {
        self.z
    }

    /// Solve `(z B - A) X = rhs` with one step of iterative refinement and
    /// a relative residual check.
    pub fn solve(&self, pencil: &HermitianPencil, rhs: &CMatrix) -> Result<CMatrix> {
        if rhs.rows() != pencil.n() {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has {} rows, pencil has {}",
                rhs.rows(),
                pencil.n()
            )));
        }
        let mut x = self.lu.solve(rhs);
        let r = rhs.sub(&pencil.apply_shifted(self.z, &x)?)?;
        let dx = self.lu.solve(&r);
        x.axpy(Complex64::new(1.0, 0.0), &dx)?;

        let scale = rhs.frobenius_norm();
        if scale > 0.0 {
            let res = rhs
                .sub(&pencil.apply_shifted(self.z, &x)?)?
                .frobenius_norm()
                / scale;
            if !(res < SOLVE_RESIDUAL_TOL) {
                return Err(Error::SingularShift {
                    z: self.z,
                    pivot: self.lu.min_pivot(),
                    column: pencil.n(),
                });
            }
        }
        Ok(x)
    }
}

/// Solve `(z B - A) X = rhs`.
pub fn shifted_solve(pencil: &HermitianPencil, z: Complex64, rhs: &CMatrix) -> Result<CMatrix> {
    ShiftedSystem::factor(pencil, z)?.solve(pencil, rhs)
}

/// `U^H B V`.
pub fn b_inner(pencil: &HermitianPencil, u: &CMatrix, v: &CMatrix) -> Result<CMatrix> {
    if u.rows() != pencil.n() || v.rows() != pencil.n() {
        return Err(Error::DimensionMismatch(format!(
            "blocks with {} and {} rows for a pencil of size {}",
            u.rows(),
            v.rows(),
            pencil.n()
        )));
    }
    u.adjoint_mul(&pencil.apply_b(v)?)
}
