//! Partitioning a spectral region into parts covered by translates of one
//! Zolotarev filter.
//!
//! Each part's owned interval is mapped onto the filter's pass band
//! `[-G, G]`, so the FEAST search interval (the image of `[-1, 1]`) is the
//! owned interval widened by the factor `1/G` about its center. With
//! equal-width parts the reference-domain filters are the translates
//! `r(z + 2jG)` of a single prototype, and every part has the same
//! predicted convergence factor.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{gap_from_r, worst_case_factor};
use crate::feast::{
    feast_solve, map_filter_to_interval, FeastConfig, FeastReport, SpectralInterval,
};
use crate::filters::{build_zolotarev_filter, RationalFilter};
use crate::linalg::HermitianPencil;
use crate::{Error, Result};

/// Iteration counts above this are reported as impractical.
pub const IMPRACTICAL_ITERATIONS: usize = 100;

/// Optional plan settings.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PlanOptions {
    /// Interior breakpoints (`k_parts - 1` strictly increasing values inside
    /// the global interval). Equal widths when absent.
    pub breakpoints: Option<Vec<f64>>,
    /// Each owned interval is widened by this fraction of its width on both
    /// sides before being mapped onto the pass band.
    pub overlap: f64,
}

/// One part of a plan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanPart {
    /// Interval whose eigenvalues this part reports.
    pub owned: SpectralInterval,
    /// FEAST search interval (image of the reference `[-1, 1]`).
    pub interval: SpectralInterval,
    pub m: usize,
    #[serde(rename = "R")]
    pub r: f64,
    pub predicted_factor: f64,
    pub estimated_count: usize,
    pub suggested_n: usize,
}

/// A partition of `global` into parts with translated filters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalPlan {
    pub global: SpectralInterval,
    pub gap: f64,
    pub overlap: f64,
    pub parts: Vec<PlanPart>,
}

impl IntervalPlan {
    pub fn to_json(&self) -> Result<String> {
        crate::json::to_string(self)
    }

    /// Part whose owned interval's center is nearest to `lambda`.
    pub fn nearest_part(&self, lambda: f64) -> usize {
        (0..self.parts.len())
            .min_by(|&a, &b| {
                let da = (self.parts[a].owned.center() - lambda).abs();
                let db = (self.parts[b].owned.center() - lambda).abs();
                da.total_cmp(&db)
            })
            .expect("plans have at least one part")
    }
}

/// `max(count + 2, ceil(1.1 count))`.
pub fn suggested_subspace(count: usize) -> usize {
    (count + 2).max((11 * count).div_ceil(10))
}

/// Split `global` into `k_parts` parts, each covered by the Zolotarev
/// filter `(m, R)` whose pass band is the part's owned interval.
pub fn plan_partition(
    global: &SpectralInterval,
    k_parts: usize,
    m: usize,
    r: f64,
    counts: &[usize],
    options: &PlanOptions,
) -> Result<IntervalPlan> {
    if k_parts == 0 {
        return Err(Error::Config("a plan needs at least one part".into()));
    }
    if counts.len() != k_parts {
        return Err(Error::Config(format!(
            "{} eigenvalue counts given for {k_parts} parts",
            counts.len()
        )));
    }
    if !(options.overlap >= 0.0 && options.overlap < 0.5) {
        return Err(Error::Config(format!(
            "overlap fraction must lie in [0, 0.5), got {}",
            options.overlap
        )));
    }
    let g = gap_from_r(r)?;
    let filter = build_zolotarev_filter(m, r)?;

    let edges: Vec<f64> = match &options.breakpoints {
        None => (0..=k_parts)
            .map(|i| {
                if i == k_parts {
                    global.lambda_max
                } else {
                    global.lambda_min
                        + (global.lambda_max - global.lambda_min) * i as f64 / k_parts as f64
                }
            })
            .collect(),
        Some(bp) => {
            if bp.len() + 1 != k_parts {
                return Err(Error::Config(format!(
                    "{} breakpoints given for {k_parts} parts",
                    bp.len()
                )));
            }
            let mut e = vec![global.lambda_min];
            e.extend_from_slice(bp);
            e.push(global.lambda_max);
            if e.windows(2).any(|w| !(w[0] < w[1])) {
                return Err(Error::Config(
                    "breakpoints must increase strictly inside the interval".into(),
                ));
            }
            e
        }
    };

    let parts = edges
        .windows(2)
        .zip(counts)
        .map(|(w, &count)| {
            let owned = SpectralInterval::new(w[0], w[1])?;
            let pad = options.overlap * (w[1] - w[0]);
            let band_half = owned.half_width() + pad;
            let c = owned.center();
            let interval = SpectralInterval::new(c - band_half / g, c + band_half / g)?;
            let mapped = map_filter_to_interval(&filter, &interval);
            let predicted_factor = worst_case_factor(&mapped.to_reference()?, g)?;
            Ok(PlanPart {
                owned,
                interval,
                m,
                r,
                predicted_factor,
                estimated_count: count,
                suggested_n: suggested_subspace(count),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IntervalPlan {
        global: *global,
        gap: g,
        overlap: options.overlap,
        parts,
    })
}

/// Predicted iteration count for a residual to fall from `start` to `tol`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "iterations", rename_all = "snake_case")]
pub enum IterationEstimate {
    Converges(usize),
    /// More than [`IMPRACTICAL_ITERATIONS`] iterations.
    Impractical(usize),
    /// Factor `>= 1`: the residual does not decrease.
    NonConvergent,
}

/// `ceil(log(tol / start) / log(factor))`.
pub fn predicted_iterations(
    factor: f64,
    start_residual: f64,
    tol: f64,
) -> Result<IterationEstimate> {
    if !(factor > 0.0) || !(start_residual > 0.0) || !(tol > 0.0) {
        return Err(Error::Config(format!(
            "need positive factor, start residual and tolerance (got {factor}, {start_residual}, {tol})"
        )));
    }
    if factor >= 1.0 {
        return Ok(IterationEstimate::NonConvergent);
    }
    if start_residual <= tol {
        return Ok(IterationEstimate::Converges(0));
    }
    let raw = (tol / start_residual).ln() / factor.ln();
    // guard against 6.000000000000001 -> 7
    let k = (raw - 1e-9 * raw.max(1.0)).ceil() as usize;
    Ok(if k > IMPRACTICAL_ITERATIONS {
        IterationEstimate::Impractical(k)
    } else {
        IterationEstimate::Converges(k)
    })
}

/// Settings for solving every part of a plan.
#[derive(Debug, Clone)]
pub struct PlanSolveConfig {
    /// Replace the plan's Zolotarev filter (e.g. to compare families under
    /// the same partition and subspace policy).
    pub filter_override: Option<RationalFilter>,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

/// An eigenpair assigned to a part after de-duplication.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AssignedEigenvalue {
    pub value: f64,
    pub residual: f64,
    pub part: usize,
}

/// Per-part reports plus the merged eigenvalue list.
#[derive(Debug, Clone)]
pub struct PlanSolution {
    pub reports: Vec<FeastReport>,
    pub eigenvalues: Vec<AssignedEigenvalue>,
}

impl PlanSolution {
    pub fn iteration_counts(&self) -> Vec<usize> {
        self.reports.iter().map(|r| r.iteration_count()).collect()
    }
}

/// Run FEAST independently (and concurrently) on every part. Each part
/// keeps the eigenvalues in its own owned interval; with overlap, a value
/// found by several parts is kept once, by the part with the nearest
/// owned-interval center.
pub fn solve_plan(
    pencil: &HermitianPencil,
    plan: &IntervalPlan,
    config: &PlanSolveConfig,
) -> Result<PlanSolution> {
    let default_filter = match &config.filter_override {
        Some(f) => f.clone(),
        None => {
            let p = plan
                .parts
                .first()
                .ok_or_else(|| Error::Config("empty plan".into()))?;
            build_zolotarev_filter(p.m, p.r)?
        }
    };
    let reports: Vec<FeastReport> = plan
        .parts
        .par_iter()
        .enumerate()
        .map(|(i, part)| {
            let cfg = FeastConfig {
                filter: default_filter.clone(),
                subspace_size: part.suggested_n.min(pencil.n() - 1),
                tol: config.tol,
                max_iter: config.max_iter,
                seed: config.seed.wrapping_add(i as u64),
            };
            feast_solve(pencil, &part.interval, &cfg)
        })
        .collect::<Result<_>>()?;

    let mut found: Vec<AssignedEigenvalue> = Vec::new();
    for (i, rep) in reports.iter().enumerate() {
        for (&value, &residual) in rep.eigenpairs.values.iter().zip(&rep.eigenpairs.residuals) {
            let inside_owned =
                value >= plan.parts[i].owned.lambda_min && value <= plan.parts[i].owned.lambda_max;
            let padded = plan.overlap > 0.0;
            if (inside_owned || padded) && plan.nearest_part(value) == i {
                found.push(AssignedEigenvalue {
                    value,
                    residual,
                    part: i,
                });
            }
        }
    }
    found.sort_by(|a, b| a.value.total_cmp(&b.value));
    Ok(PlanSolution {
        reports,
        eigenvalues: found,
    })
}
