//! Dense Hermitian eigensolvers: cyclic Jacobi for the standard problem and
//! a Cholesky reduction for the generalized one, with a rank-filtering
//! fallback when the right-hand matrix is numerically singular.

use num_complex::Complex64;

use super::CMatrix;
use crate::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Relative threshold below which an eigenvalue of the (diagonally scaled)
/// right-hand matrix is treated as zero.
pub const RANK_TOL: f64 = 1e-12;

/// Eigenvalues (ascending) and eigenvectors (as columns).
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

/// Result of [`reduced_eig`].
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedEig {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// `n x r` eigenvectors with `W^H Bhat W = I`.
    pub vectors: CMatrix,
    /// Number of directions discarded as numerically dependent.
    pub dropped: usize,
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Each rotation first removes the phase of `a_pq` with a diagonal unitary
/// and then applies an ordinary real Jacobi rotation.
pub fn hermitian_eig(a: &CMatrix) -> Result<HermitianEig> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigenproblem for a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let mut a = a.hermitian_part();
    let mut v = CMatrix::identity(n);
    let total = a.frobenius_norm();
    if n > 1 && total > 0.0 {
        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            let off: f64 = (0..n)
                .flat_map(|j| (0..j).map(move |i| (i, j)))
                .map(|(i, j)| a[(i, j)].norm_sqr())
                .sum::<f64>()
                .sqrt();
            if off <= 1e-16 * total {
                converged = true;
                break;
            }
            for q in 1..n {
                for p in 0..q {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
        if !converged {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    Ok(HermitianEig {
        values: order.iter().map(|&i| a[(i, i)].re).collect(),
        vectors: v.select_cols(&order),
    })
}

fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    if mag <= 1e-300 || mag < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[(p, q)] = Complex64::new(0.0, 0.0);
        a[(q, p)] = Complex64::new(0.0, 0.0);
        return;
    }
    let phase = apq / mag; // e^{i phi}
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau == 0.0 {
        1.0
    } else {
        tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let pc = phase.conj();

    // columns: A G with G = [[c, s], [-s conj(e), c conj(e)]]
    for m in [&mut *a, &mut *v] {
        let (cp, cq) = m.col_pair_mut(p, q);
        for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
            let xp = *x;
            let yq = *y * pc;
            *x = xp * c - yq * s;
            *y = xp * s + yq * c;
        }
    }
    // rows: G^H A
    let n = a.rows();
    for j in 0..n {
        let xp = a[(p, j)];
        let yq = a[(q, j)] * phase;
        a[(p, j)] = xp * c - yq * s;
        a[(q, j)] = xp * s + yq * c;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
}

/// Solve `Ahat W = Bhat W D` for Hermitian `Ahat` and Hermitian positive
/// semi-definite `Bhat`.
///
/// Both matrices are first scaled by `diag(Bhat)^{-1/2}`. If the scaled
/// `Bhat` admits a Cholesky factorization with every pivot above
/// [`RANK_TOL`], the problem is reduced to standard form through it.
/// Otherwise `Bhat` is diagonalized, eigen-directions below
/// `RANK_TOL * max` are dropped, and the problem is solved on the retained
/// subspace; `dropped` reports how many directions were removed.
pub fn reduced_eig(ahat: &CMatrix, bhat: &CMatrix) -> Result<ReducedEig> {
    let n = ahat.rows();
    if !ahat.is_square() || !bhat.is_square() || bhat.rows() != n {
        return Err(Error::DimensionMismatch(format!(
            "reduced pencil of sizes {}x{} and {}x{}",
            ahat.rows(),
            ahat.cols(),
            bhat.rows(),
            bhat.cols()
        )));
    }
    if n == 0 {
        return Err(Error::RankCollapse { dimension: 0 });
    }
    let ahat = ahat.hermitian_part();
    let bhat = bhat.hermitian_part();
    let diag_max = (0..n).map(|i| bhat[(i, i)].re).fold(0.0, f64::max);
    if !(diag_max > 0.0) || !diag_max.is_finite() {
        return Err(Error::RankCollapse { dimension: n });
    }
    // Directions with a negligible diagonal carry no information at all.
    let d: Vec<f64> = (0..n)
        .map(|i| {
            let b = bhat[(i, i)].re;
            if b > RANK_TOL * RANK_TOL * diag_max {
                1.0 / b.sqrt()
            } else {
                0.0
            }
        })
        .collect();
    let scale = |m: &CMatrix| CMatrix::from_fn(n, n, |i, j| m[(i, j)] * (d[i] * d[j]));
    let a_s = scale(&ahat);
    let b_s = scale(&bhat);

    if d.iter().all(|&x| x > 0.0) {
        if let Some(l) = cholesky(&b_s, RANK_TOL) {
            let x = forward_solve(&l, &a_s);
            let c = forward_solve(&l, &x.adjoint());
            let eig = hermitian_eig(&c)?;
            let w = back_solve_adjoint(&l, &eig.vectors);
            let w = CMatrix::from_fn(n, n, |i, j| w[(i, j)] * d[i]);
            return Ok(ReducedEig {
                values: eig.values,
                vectors: w,
                dropped: 0,
            });
        }
    }

    // rank-filtering fallback
    let beig = hermitian_eig(&b_s)?;
    let smax = beig.values.iter().fold(0.0f64, |acc, &x| acc.max(x));
    let keep: Vec<usize> = (0..n)
        .filter(|&i| beig.values[i] > RANK_TOL * smax)
        .collect();
    if keep.is_empty() {
        return Err(Error::RankCollapse { dimension: n });
    }
    let r = keep.len();
    let t = CMatrix::from_fn(n, r, |i, k| {
        let idx = keep[k];
        beig.vectors[(i, idx)] / beig.values[idx].sqrt()
    });
    let c = t.adjoint_mul(&a_s.matmul(&t)?)?;
    let eig = hermitian_eig(&c)?;
    let w = t.matmul(&eig.vectors)?;
    let w = CMatrix::from_fn(n, r, |i, j| w[(i, j)] * d[i]);
    Ok(ReducedEig {
        values: eig.values,
        vectors: w,
        dropped: n - r,
    })
}

/// Lower Cholesky factor, or `None` when a pivot drops below `tol` times the
/// corresponding diagonal entry.
pub fn cholesky(b: &CMatrix, tol: f64) -> Option<CMatrix> {
    let n = b.rows();
    let mut l = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = b[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > tol * b[(j, j)].re.abs()) || !(d > 0.0) {
            return None;
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
    Some(l)
}

/// `L^{-1} X` for lower-triangular `L`.
fn forward_solve(l: &CMatrix, x: &CMatrix) -> CMatrix {
    let n = l.rows();
    let mut out = x.clone();
    for c in 0..x.cols() {
        let col = out.col_mut(c);
        for i in 0..n {
            let mut s = col[i];
            for k in 0..i {
                s -= l[(i, k)] * col[k];
            }
            col[i] = s / l[(i, i)];
        }
    }
    out
}

/// `L^{-H} X` for lower-triangular `L`.
fn back_solve_adjoint(l: &CMatrix, x: &CMatrix) -> CMatrix {
    let n = l.rows();
    let mut out = x.clone();
    for c in 0..x.cols() {
        let col = out.col_mut(c);
        for i in (0..n).rev() {
            let mut s = col[i];
            for k in i + 1..n {
                s -= l[(k, i)].conj() * col[k];
            }
            col[i] = s / l[(i, i)].conj();
        }
    }
    out
}
