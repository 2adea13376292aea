//! FEAST subspace iteration with a rational filter.
//!
//! Each step computes `Z_k = r(M) Y_{k-1}` with `M = B^{-1} A`, solves the
//! reduced pencil `(Z^H A Z, Z^H B Z)` and takes `Y_k = Z_k W_k`. The
//! columns of `Y_k` are B-orthonormal because `W^H (Z^H B Z) W = I`; no
//! explicit orthogonalization is done.

mod harness;
mod operator;

use std::fmt::Write as _;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::filters::{FilterSpec, RationalFilter};
use crate::linalg::{b_inner, reduced_eig, CMatrix, HermitianPencil};
use crate::{Error, Result};

pub use harness::{span_check, theorem22_check, SpanOutcome, Theorem22Outcome};
pub use operator::FilterOperator;

/// Residuals below this are at the inner-solve floor and carry no
/// information about the contraction rate.
pub const RESIDUAL_FLOOR: f64 = 1e-13;

/// Physical search interval `[lambda_min, lambda_max]`, mapped affinely
/// onto the reference interval `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralInterval {
    pub lambda_min: f64,
    pub lambda_max: f64,
}

impl SpectralInterval {
    pub fn new(lambda_min: f64, lambda_max: f64) -> Result<Self> {
        if !(lambda_min.is_finite() && lambda_max.is_finite() && lambda_min < lambda_max) {
            return Err(Error::Config(format!(
                "search interval [{lambda_min}, {lambda_max}] must satisfy lambda_min < lambda_max"
            )));
        }
        Ok(Self {
            lambda_min,
            lambda_max,
        })
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lambda_max + self.lambda_min)
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.lambda_max - self.lambda_min)
    }

    /// `z = (2 lambda - (lambda_max + lambda_min)) / (lambda_max - lambda_min)`.
    pub fn to_reference(&self, lambda: f64) -> f64 {
        (lambda - self.center()) / self.half_width()
    }

    pub fn to_physical(&self, z: f64) -> f64 {
        self.center() + self.half_width() * z
    }

    /// Strict membership.
    pub fn contains(&self, lambda: f64) -> bool {
        lambda > self.lambda_min && lambda < self.lambda_max
    }

    /// `max(|lambda_min|, |lambda_max|)`, the residual normalization.
    pub fn scale(&self) -> f64 {
        self.lambda_min.abs().max(self.lambda_max.abs())
    }
}

/// A filter expressed in physical coordinates:
/// `r(lambda) = constant + sum_j weights[j] / (poles[j] - lambda)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalFilter {
    pub spec: FilterSpec,
    pub poles: Vec<Complex64>,
    pub weights: Vec<Complex64>,
    pub constant: Complex64,
    pub reducible: bool,
    pub interval: SpectralInterval,
}

impl PhysicalFilter {
    /// `r(lambda)` at a real point, combining conjugate pairs when possible.
    pub fn eval(&self, lambda: f64) -> f64 {
        if self.reducible {
            let mut acc = self.constant.re;
            for (p, w) in self.poles.chunks(2).zip(self.weights.chunks(2)) {
                acc += 2.0 * (w[0] / (p[0] - lambda)).re;
            }
            acc
        } else {
            self.eval_complex(Complex64::new(lambda, 0.0)).re
        }
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let mut acc = self.constant;
        for (&p, &w) in self.poles.iter().zip(&self.weights) {
            acc += w / (p - z);
        }
        acc
    }

    /// Map back to reference coordinates.
    pub fn to_reference(&self) -> Result<RationalFilter> {
        let c = self.interval.center();
        let h = self.interval.half_width();
        RationalFilter::from_parts(
            self.spec,
            self.poles.iter().map(|p| (p - c) / h).collect(),
            self.weights.iter().map(|w| w / h).collect(),
            self.constant,
        )
    }
}

/// Physical poles `c + h z_j` and weights `h w_j` with `c`, `h` the center
/// and half-width of `interval`; the constant is unchanged. Then
/// `r_phys(lambda) = r_ref((lambda - c) / h)`.
pub fn map_filter_to_interval(
    filter: &RationalFilter,
    interval: &SpectralInterval,
) -> PhysicalFilter {
    let c = interval.center();
    let h = interval.half_width();
    PhysicalFilter {
        spec: *filter.spec(),
        poles: filter.poles().iter().map(|z| c + h * z).collect(),
        weights: filter.weights().iter().map(|w| h * w).collect(),
        constant: filter.constant(),
        reducible: filter.conjugate_pairs_reducible(),
        interval: *interval,
    }
}

/// `Z = r(M) Y` for a single call (factorizations are not kept).
pub fn apply_filter(
    pencil: &HermitianPencil,
    filter: &PhysicalFilter,
    y: &CMatrix,
) -> Result<CMatrix> {
    FilterOperator::new(pencil, filter.clone())?.apply(y)
}

/// Solver configuration.
#[derive(Debug, Clone)]
pub struct FeastConfig {
    /// Filter in reference coordinates.
    pub filter: RationalFilter,
    /// Subspace size `n`.
    pub subspace_size: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl FeastConfig {
    pub fn validate(&self, n_total: usize) -> Result<()> {
        if self.subspace_size == 0 || self.subspace_size >= n_total {
            return Err(Error::Config(format!(
                "subspace size n = {} must satisfy 1 <= n < N = {n_total}",
                self.subspace_size
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Config(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::Config("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

/// Seeded `N x n` block of standard-normal real entries.
pub fn random_block(rows: usize, cols: usize, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CMatrix::from_fn(rows, cols, |_, _| {
        let v: f64 = StandardNormal.sample(&mut rng);
        Complex64::new(v, 0.0)
    })
}

/// One iteration's diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub k: usize,
    pub ritz_values: Vec<f64>,
    pub residuals: Vec<f64>,
    pub count_inside: usize,
    /// `None` when no Ritz value lies inside the interval.
    pub max_residual_inside: Option<f64>,
    /// Directions removed by the reduced eigensolver this iteration.
    pub dropped: usize,
}

/// Converged (or last) eigenpairs inside the interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpairs {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
    pub residuals: Vec<f64>,
}

/// Outcome of [`feast_solve`].
#[derive(Debug, Clone)]
pub struct FeastReport {
    pub interval: SpectralInterval,
    pub filter: FilterSpec,
    pub subspace_size: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub iterations: Vec<IterationRecord>,
    pub converged: bool,
    pub eigenpairs: Eigenpairs,
    /// Contraction measured from the residual history, when enough
    /// iterations are available.
    pub observed_factor: Option<f64>,
}

#[derive(Serialize)]
struct ReportFile<'a> {
    interval: &'a SpectralInterval,
    filter: &'a FilterSpec,
    subspace_size: usize,
    tol: f64,
    max_iter: usize,
    seed: u64,
    converged: bool,
    iteration_count: usize,
    eigenvalues: &'a [f64],
    residuals: &'a [f64],
    observed_factor: Option<f64>,
    iterations: &'a [IterationRecord],
}

impl FeastReport {
    pub fn iteration_count(&self) -> usize {
        self.iterations.len()
    }

    pub fn to_json(&self) -> Result<String> {
        crate::json::to_string(&ReportFile {
            interval: &self.interval,
            filter: &self.filter,
            subspace_size: self.subspace_size,
            tol: self.tol,
            max_iter: self.max_iter,
            seed: self.seed,
            converged: self.converged,
            iteration_count: self.iterations.len(),
            eigenvalues: &self.eigenpairs.values,
            residuals: &self.eigenpairs.residuals,
            observed_factor: self.observed_factor,
            iterations: &self.iterations,
        })
    }

    /// Residual trace with header `k,count_inside,max_residual`.
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("k,count_inside,max_residual\n");
        for it in &self.iterations {
            let r = it
                .max_residual_inside
                .map_or_else(String::new, |r| format!("{r:.16e}"));
            let _ = writeln!(out, "{},{},{}", it.k, it.count_inside, r);
        }
        out
    }
}

/// Stepping interface to the FEAST iteration, exposing `Z_k` and `Y_k`.
pub struct FeastIterator<'a> {
    pencil: &'a HermitianPencil,
    interval: SpectralInterval,
    operator: FilterOperator<'a>,
    y: CMatrix,
    z: Option<CMatrix>,
    ritz_values: Vec<f64>,
    residuals: Vec<f64>,
    k: usize,
}

impl<'a> FeastIterator<'a> {
    pub fn new(
        pencil: &'a HermitianPencil,
        interval: SpectralInterval,
        config: &FeastConfig,
    ) -> Result<Self> {
        config.validate(pencil.n())?;
        let physical = map_filter_to_interval(&config.filter, &interval);
        let operator = FilterOperator::new(pencil, physical)?;
        Ok(Self {
            pencil,
            interval,
            operator,
            y: random_block(pencil.n(), config.subspace_size, config.seed),
            z: None,
            ritz_values: Vec::new(),
            residuals: Vec::new(),
            k: 0,
        })
    }

    /// Current block `Y_k` (`Y_0` before the first step).
    pub fn y(&self) -> &CMatrix {
        &self.y
    }

    /// Filtered block `Z_k` of the last step.
    pub fn z(&self) -> Option<&CMatrix> {
        self.z.as_ref()
    }

    pub fn ritz_values(&self) -> &[f64] {
        &self.ritz_values
    }

    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    /// Perform one iteration.
    pub fn step(&mut self) -> Result<IterationRecord> {
        let z = self.operator.apply(&self.y)?;
        let az = self.pencil.apply_a(&z)?;
        let bz = self.pencil.apply_b(&z)?;
        let ahat = z.adjoint_mul(&az)?;
        let bhat = z.adjoint_mul(&bz)?;
        let eig = reduced_eig(&ahat, &bhat)?;
        let y = z.matmul(&eig.vectors)?;
        let ay = az.matmul(&eig.vectors)?;
        let by = bz.matmul(&eig.vectors)?;
        let scale = self.interval.scale();
        let residuals: Vec<f64> = eig
            .values
            .iter()
            .enumerate()
            .map(|(i, &theta)| {
                let r: f64 = ay
                    .col(i)
                    .iter()
                    .zip(by.col(i))
                    .map(|(a, b)| (a - theta * b).norm_sqr())
                    .sum();
                r.sqrt() / scale
            })
            .collect();
        self.k += 1;
        let inside: Vec<usize> = (0..eig.values.len())
            .filter(|&i| self.interval.contains(eig.values[i]))
            .collect();
        let max_inside = inside
            .iter()
            .map(|&i| residuals[i])
            .fold(None, |acc: Option<f64>, r| {
                Some(acc.map_or(r, |a| a.max(r)))
            });
        let record = IterationRecord {
            k: self.k,
            ritz_values: eig.values.clone(),
            residuals: residuals.clone(),
            count_inside: inside.len(),
            max_residual_inside: max_inside,
            dropped: eig.dropped,
        };
        self.y = y;
        self.z = Some(z);
        self.ritz_values = eig.values;
        self.residuals = residuals;
        Ok(record)
    }

    /// Ritz pairs strictly inside the interval.
    pub fn inside_pairs(&self) -> Eigenpairs {
        let idx: Vec<usize> = (0..self.ritz_values.len())
            .filter(|&i| self.interval.contains(self.ritz_values[i]))
            .collect();
        Eigenpairs {
            values: idx.iter().map(|&i| self.ritz_values[i]).collect(),
            vectors: self.y.select_cols(&idx),
            residuals: idx.iter().map(|&i| self.residuals[i]).collect(),
        }
    }
}

/// Run FEAST until every Ritz value inside the interval has residual below
/// `tol`, the interval is found empty on two consecutive iterations, or
/// `max_iter` is reached (then `converged = false`).
pub fn feast_solve(
    pencil: &HermitianPencil,
    interval: &SpectralInterval,
    config: &FeastConfig,
) -> Result<FeastReport> {
    let mut it = FeastIterator::new(pencil, *interval, config)?;
    let mut records: Vec<IterationRecord> = Vec::new();
    let mut converged = false;
    for _ in 0..config.max_iter {
        let rec = it.step()?;
        let empty_twice =
            rec.count_inside == 0 && records.last().is_some_and(|prev| prev.count_inside == 0);
        let done = match rec.max_residual_inside {
            Some(r) => r < config.tol,
            None => empty_twice,
        };
        records.push(rec);
        if done {
            converged = true;
            break;
        }
    }
    let observed = observed_contraction_from(&records).ok();
    Ok(FeastReport {
        interval: *interval,
        filter: *config.filter.spec(),
        subspace_size: config.subspace_size,
        tol: config.tol,
        max_iter: config.max_iter,
        seed: config.seed,
        iterations: records,
        converged,
        eigenpairs: it.inside_pairs(),
        observed_factor: observed,
    })
}

/// Geometric mean of the ratios of successive in-interval residuals,
/// taken over the iterations after `count_inside` last changed. Ratios
/// starting from a residual below [`RESIDUAL_FLOOR`] are ignored.
pub fn observed_contraction(report: &FeastReport) -> Result<f64> {
    observed_contraction_from(&report.iterations)
}

fn observed_contraction_from(records: &[IterationRecord]) -> Result<f64> {
    let start = records
        .windows(2)
        .rposition(|w| w[0].count_inside != w[1].count_inside)
        .map_or(0, |p| p + 1);
    let seq: Vec<f64> = records[start..]
        .iter()
        .map_while(|r| r.max_residual_inside)
        .collect();
    contraction_from_sequence(&seq)
}

/// Geometric mean of `r[k+1] / r[k]` over the pairs with
/// `r[k] >= RESIDUAL_FLOOR`.
pub fn contraction_from_sequence(residuals: &[f64]) -> Result<f64> {
    let logs: Vec<f64> = residuals
        .windows(2)
        .filter(|w| w[0] >= RESIDUAL_FLOOR && w[1] > 0.0)
        .map(|w| (w[1] / w[0]).ln())
        .collect();
    if logs.is_empty() {
        return Err(Error::InsufficientData(format!(
            "need two stabilized residuals above {RESIDUAL_FLOOR:e}, have {}",
            residuals.len()
        )));
    }
    Ok((logs.iter().sum::<f64>() / logs.len() as f64).exp())
}

/// `Y^H B Y`, for checking B-orthonormality of a block.
pub fn b_gram(pencil: &HermitianPencil, y: &CMatrix) -> Result<CMatrix> {
    b_inner(pencil, y, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contraction_examples() {
        let c = contraction_from_sequence(&[1e-2, 1e-4, 1e-6]).unwrap();
        assert!((c / 1e-2 - 1.0).abs() < 1e-12);
        let c = contraction_from_sequence(&[1e-2, 1e-14, 1e-14]).unwrap();
        assert!((c / 1e-12 - 1.0).abs() < 1e-12);
        assert!(contraction_from_sequence(&[1e-2]).is_err());
        assert!(contraction_from_sequence(&[1e-14, 1e-15]).is_err());
    }

    #[test]
    fn interval_maps() {
        let i = SpectralInterval::new(-65.0, 4.96).unwrap();
        assert!((i.to_reference(-65.0) + 1.0).abs() < 1e-15);
        assert!((i.to_physical(1.0) - 4.96).abs() < 1e-13);
        assert!(SpectralInterval::new(1.0, 1.0).is_err());
        assert!(SpectralInterval::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn config_validation() {
        let p = HermitianPencil::diagonal(&[0.1, 0.5, 10.0]).unwrap();
        let filter = crate::filters::build_zolotarev_filter(4, 1e6).unwrap();
        let i = SpectralInterval::new(-1.0, 1.0).unwrap();
        for n in [0, 3] {
            let cfg = FeastConfig {
                filter: filter.clone(),
                subspace_size: n,
                tol: 1e-12,
                max_iter: 10,
                seed: 1,
            };
            assert!(matches!(feast_solve(&p, &i, &cfg), Err(Error::Config(_))));
        }
    }
}
