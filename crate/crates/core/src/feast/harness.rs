//! Verification harnesses for pencils small enough to diagonalize fully.
//!
//! Both checks work in the coordinates of the B-orthonormal eigenbasis
//! `X`, where `r(M)^k = X r(Lambda)^k X^H B` and B-norms become Euclidean
//! norms.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{map_filter_to_interval, random_block, FeastConfig, FeastIterator, SpectralInterval};
use crate::linalg::{
    max_principal_angle_sine, orthonormal_basis, reduced_eig, solve_dense, CMatrix, HermitianPencil,
};
use crate::{Error, Result};

/// Absolute slack on the projector bound for rounding in the computed
/// projector.
pub const PROJECTOR_SLACK: f64 = 1e-12;

/// Outcome of [`theorem22_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem22Outcome {
    pub holds: bool,
    /// `alpha_j = ||w_j||_2`, in order of decreasing `|r(lambda_j)|`.
    pub alpha: Vec<f64>,
    /// `lhs[k-1][j] = ||(I - P_k) x_j||_B`.
    pub lhs: Vec<Vec<f64>>,
    /// `bound[k-1][j] = alpha_j |r(lambda_{n+1}) / r(lambda_j)|^k`.
    pub bound: Vec<Vec<f64>>,
}

/// Check `||(I - P_k) x_j||_B <= alpha_j |r(lambda_{n+1}) / r(lambda_j)|^k`
/// for `j <= n` and `k <= iterations`, where eigenpairs are ordered by
/// decreasing `|r(lambda)|`, `P_k` is the B-orthogonal projector onto
/// `span(r(M)^k Y_0)` and `W = (X'^H B Y_0)(X_n^H B Y_0)^{-1}`.
pub fn theorem22_check(
    pencil: &HermitianPencil,
    interval: &SpectralInterval,
    config: &FeastConfig,
    iterations: usize,
) -> Result<Theorem22Outcome> {
    let n_total = pencil.n();
    let n = config.subspace_size;
    config.validate(n_total)?;
    let filter = map_filter_to_interval(&config.filter, interval);
    let eig = reduced_eig(&pencil.dense_a(), &pencil.dense_b())?;
    if eig.dropped > 0 {
        return Err(Error::Config(
            "B must be positive definite for the harness".into(),
        ));
    }
    let r: Vec<f64> = eig.values.iter().map(|&l| filter.eval(l)).collect();
    let mut order: Vec<usize> = (0..n_total).collect();
    order.sort_by(|&a, &b| r[b].abs().total_cmp(&r[a].abs()));
    let r_sorted: Vec<f64> = order.iter().map(|&i| r[i]).collect();
    let x = eig.vectors.select_cols(&order);

    // coordinates of Y0 in the eigenbasis
    let y0 = random_block(n_total, n, config.seed);
    let c = x.adjoint_mul(&pencil.apply_b(&y0)?)?;
    let top: Vec<usize> = (0..n).collect();
    let rest: Vec<usize> = (n..n_total).collect();
    let c_n = select_rows(&c, &top);
    let c_rest = select_rows(&c, &rest);
    // W = C' C_n^{-1}  <=>  C_n^H W^H = C'^H
    let w_h = solve_dense(&c_n.adjoint(), &c_rest.adjoint())
        .map_err(|_| Error::Config("X_n^H B Y_0 is singular; choose another seed".into()))?;
    let alpha: Vec<f64> = (0..n)
        .map(|j| {
            w_h.data()[j..]
                .iter()
                .step_by(n)
                .map(|v| v.norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .collect();

    let mut lhs = Vec::with_capacity(iterations);
    let mut bound = Vec::with_capacity(iterations);
    let mut holds = true;
    let mut ck = c.clone();
    for k in 1..=iterations {
        for (i, &ri) in r_sorted.iter().enumerate() {
            for j in 0..n {
                ck[(i, j)] *= ri;
            }
        }
        let q = orthonormal_basis(&ck, 1e-14);
        let mut lhs_k = Vec::with_capacity(n);
        let mut bound_k = Vec::with_capacity(n);
        for j in 0..n {
            // (I - Q Q^H) e_j
            let mut v = vec![Complex64::new(0.0, 0.0); n_total];
            v[j] = Complex64::new(1.0, 0.0);
            for col in 0..q.cols() {
                let qc = q.col(col);
                let coef = qc[j].conj();
                for (vi, qi) in v.iter_mut().zip(qc) {
                    *vi -= coef * qi;
                }
            }
            let l = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let b = alpha[j] * (r_sorted[n] / r_sorted[j]).abs().powi(k as i32);
            if l > b + PROJECTOR_SLACK {
                holds = false;
            }
            lhs_k.push(l);
            bound_k.push(b);
        }
        lhs.push(lhs_k);
        bound.push(bound_k);
    }
    Ok(Theorem22Outcome {
        holds,
        alpha,
        lhs,
        bound,
    })
}

fn select_rows(m: &CMatrix, rows: &[usize]) -> CMatrix {
    CMatrix::from_fn(rows.len(), m.cols(), |i, j| m[(rows[i], j)])
}

/// Outcome of [`span_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpanOutcome {
    /// `sin` of the largest principal angle between `span(Z_k)` and
    /// `span(r(M)^k Y_0)` for `k = 1..`.
    pub max_angle_sine: Vec<f64>,
    /// Column count of `Z_k`, which equals `n` while full rank is kept.
    pub ranks: Vec<usize>,
}

/// Compare the FEAST iterates `Z_k` with the explicit powers
/// `r(M)^k Y_0 = X r(Lambda)^k X^H B Y_0`.
pub fn span_check(
    pencil: &HermitianPencil,
    interval: &SpectralInterval,
    config: &FeastConfig,
    iterations: usize,
) -> Result<SpanOutcome> {
    let filter = map_filter_to_interval(&config.filter, interval);
    let eig = reduced_eig(&pencil.dense_a(), &pencil.dense_b())?;
    let x = eig.vectors;
    let r: Vec<f64> = eig.values.iter().map(|&l| filter.eval(l)).collect();

    let mut it = FeastIterator::new(pencil, *interval, config)?;
    let mut coords = x.adjoint_mul(&pencil.apply_b(it.y())?)?;
    let mut sines = Vec::with_capacity(iterations);
    let mut ranks = Vec::with_capacity(iterations);
    for _ in 0..iterations {
        it.step()?;
        for (i, &ri) in r.iter().enumerate() {
            for j in 0..coords.cols() {
                coords[(i, j)] *= ri;
            }
        }
        let power = x.matmul(&coords)?;
        let z = it.z().expect("a step was taken");
        ranks.push(z.cols());
        sines.push(max_principal_angle_sine(z, &power)?);
    }
    Ok(SpanOutcome {
        max_angle_sine: sines,
        ranks,
    })
}
