//! Convergence-factor analytics for rational filters.
//!
//! The worst-case factor of a filter for gap parameter `G` is
//!
//! ```text
//! max_{|x| >= 1/G} |r(x)|  /  min_{|x| <= G} |r(x)|
//! ```
//!
//! Both regions are searched on bounded variables: the interior as
//! `x = tanh(tau)` and the exterior as `x = 1/u`, `u = tanh(tau)`, with
//! `tau` in `[-atanh G, atanh G]`. The hyperbolic parameterization spreads
//! the samples evenly over the ripples of filters whose poles crowd toward
//! `+-1` (the Zolotarev ripples are uniform in exactly this variable).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elliptic::EllipticModulus;
use crate::filters::{
    build_gauss_filter, build_trapezoid_filter, trapezoid_closed_form, FilterKind, RationalFilter,
    Shape,
};
use crate::search::{golden_section, grid_extremum, Goal};
use crate::{Error, Result};

const INTERIOR_SAMPLES: usize = 4096;
const EXTERIOR_SAMPLES: usize = 8192;
const SEARCH_TOL: f64 = 1e-10;

/// Smallest shape parameter considered by [`optimize_s`].
pub const S_MIN: f64 = 1.01;
/// Largest finite shape parameter considered by [`optimize_s`].
pub const S_MAX: f64 = 100.0;

/// Gap parameters: `G` in `(0, 1)` and optionally an effective gap
/// `G_eff >= 1/G` marking where the exterior spectrum actually starts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapParameters {
    pub g: f64,
    pub g_eff: Option<f64>,
}

impl GapParameters {
    pub fn new(g: f64, g_eff: Option<f64>) -> Result<Self> {
        check_gap(g)?;
        if let Some(e) = g_eff {
            if !(e >= 1.0 / g) || !e.is_finite() {
                return Err(Error::Domain {
                    what: "effective gap G_eff",
                    value: e,
                    expected: "1/G <= G_eff < inf",
                });
            }
        }
        Ok(Self { g, g_eff })
    }
}

/// Summary of one filter's convergence factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FactorReport {
    pub factor_worst: f64,
    pub shape_used: Shape,
    /// Zolotarev only: lower and upper bounds on the equioscillation error.
    pub e_prime_bounds: Option<(f64, f64)>,
}

fn check_gap(g: f64) -> Result<()> {
    if g > 0.0 && g < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "gap parameter G",
            value: g,
            expected: "0 < G < 1",
        })
    }
}

/// Smallest `|r(x)|` over `x` in `[-G, G]`.
pub fn interior_minimum(filter: &RationalFilter, g: f64) -> Result<f64> {
    check_gap(g)?;
    let t = g.atanh();
    let refine = 4 * filter.spec().m + 8;
    let (_, lo) = grid_extremum(
        |tau| filter.eval_real(tau.tanh()).abs(),
        -t,
        t,
        INTERIOR_SAMPLES,
        refine,
        SEARCH_TOL,
        Goal::Min,
    );
    Ok(lo)
}

/// Largest `|r(x)|` over `|x| >= 1/u_max`, searched as `r(1/u)` for
/// `u` in `[-u_max, u_max]` (`u = 0` is the value at infinity).
pub fn exterior_maximum(filter: &RationalFilter, u_max: f64) -> Result<f64> {
    check_gap(u_max)?;
    let t = u_max.atanh();
    let refine = 4 * filter.spec().m + 8;
    let (_, hi) = grid_extremum(
        |tau| filter.eval_at_inverse(tau.tanh()).abs(),
        -t,
        t,
        EXTERIOR_SAMPLES,
        refine,
        SEARCH_TOL,
        Goal::Max,
    );
    Ok(hi)
}

/// Worst-case convergence factor of `filter` for gap parameter `G`.
pub fn worst_case_factor(filter: &RationalFilter, g: f64) -> Result<f64> {
    ratio(filter, g, g)
}

/// Convergence factor when the exterior spectrum starts at `|x| = G_eff`
/// instead of `1/G`.
pub fn effective_factor(filter: &RationalFilter, g: f64, g_eff: f64) -> Result<f64> {
    let gap = GapParameters::new(g, Some(g_eff))?;
    ratio(filter, gap.g, 1.0 / g_eff)
}

fn ratio(filter: &RationalFilter, g: f64, u_max: f64) -> Result<f64> {
    let lo = interior_minimum(filter, g)?;
    if lo < 1e-300 {
        return Err(Error::DegenerateFilter(lo));
    }
    Ok(exterior_maximum(filter, u_max)? / lo)
}

/// Factor together with the shape and, for Zolotarev filters, the
/// equioscillation error bounds.
pub fn factor_report(filter: &RationalFilter, g: f64) -> Result<FactorReport> {
    let spec = filter.spec();
    let bounds = match spec.kind {
        FilterKind::Zolotarev => Some(zolotarev_error_bounds(
            spec.m,
            gap_from_r(spec.shape.value())?,
        )?),
        _ => None,
    };
    Ok(FactorReport {
        factor_worst: worst_case_factor(filter, g)?,
        shape_used: spec.shape,
        e_prime_bounds: bounds,
    })
}

/// The ellipse parameter whose contour passes through `+-G`:
/// the root `S > 1` of `2 / (S + 1/S) = G`.
pub fn natural_s(g: f64) -> Result<f64> {
    check_gap(g)?;
    Ok((1.0 + ((1.0 - g) * (1.0 + g)).sqrt()) / g)
}

/// Worst-case factor of the trapezoid filter at the natural shape, in
/// closed form: `(alpha + beta) / (alpha + beta T_{2m}(G^-2))`.
pub fn trapezoid_natural_factor(m: usize, g: f64) -> Result<f64> {
    let s = natural_s(g)?;
    Ok(trapezoid_closed_form(1.0 / g, m, s)? / trapezoid_closed_form(g, m, s)?)
}

/// Result of [`optimize_s`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizedShape {
    pub shape: Shape,
    pub factor: f64,
}

/// Minimize the worst-case factor of a Gauss or trapezoid filter over
/// `S` in `[1.01, 100]` plus the unit-circle limit.
///
/// Golden-section search in `v = ln(S - 1)` from eight equal brackets,
/// together with the fixed candidates `S = 1.01, 100`, the natural shape
/// and `S = inf`.
pub fn optimize_s(kind: FilterKind, m: usize, g: f64) -> Result<OptimizedShape> {
    check_gap(g)?;
    let build = |shape: Shape| match kind {
        FilterKind::Gauss => build_gauss_filter(m, shape),
        FilterKind::Trapezoid => build_trapezoid_filter(m, shape),
        FilterKind::Zolotarev => Err(Error::InvalidSpec(
            "shape optimization applies to Gauss and trapezoid filters".into(),
        )),
    };
    let factor_at = |shape: Shape| -> f64 {
        build(shape)
            .and_then(|f| worst_case_factor(&f, g))
            .unwrap_or(f64::INFINITY)
    };
    build(Shape::Infinite)?;

    let mut candidates: Vec<(Shape, f64)> = Vec::new();
    let mut fixed = vec![S_MIN, S_MAX, Shape::Infinite.value()];
    let nat = natural_s(g)?;
    if (S_MIN..=S_MAX).contains(&nat) {
        fixed.push(nat);
    }
    for s in fixed {
        let shape = if s.is_infinite() {
            Shape::Infinite
        } else {
            Shape::Finite(s)
        };
        candidates.push((shape, factor_at(shape)));
    }

    let lo = (S_MIN - 1.0).ln();
    let hi = (S_MAX - 1.0).ln();
    let brackets = 8;
    let width = (hi - lo) / brackets as f64;
    for b in 0..brackets {
        let a = lo + width * b as f64;
        let (v, f) = golden_section(
            |v| factor_at(Shape::Finite(1.0 + v.exp())),
            a,
            a + width,
            1e-4,
            Goal::Min,
        );
        candidates.push((Shape::Finite(1.0 + v.exp()), f));
    }

    let (shape, factor) = candidates
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("candidate list is non-empty");
    Ok(OptimizedShape { shape, factor })
}

/// `R = ((1 + G) / (1 - G))^2`, the Zolotarev range with gap parameter `G`.
pub fn zolotarev_r_from_g(g: f64) -> Result<f64> {
    check_gap(g)?;
    Ok(((1.0 + g) / (1.0 - g)).powi(2))
}

/// `G = (sqrt(R) - 1) / (sqrt(R) + 1)`.
pub fn gap_from_r(r: f64) -> Result<f64> {
    if !(r > 1.0 && r.is_finite()) {
        return Err(Error::Domain {
            what: "Zolotarev range R",
            value: r,
            expected: "1 < R < inf",
        });
    }
    let s = r.sqrt();
    Ok((s - 1.0) / (s + 1.0))
}

/// Nome `rho = exp(-pi K(mu') / (2 K(mu)))` with `mu = G^2`.
fn zolotarev_nome(g: f64) -> Result<f64> {
    check_gap(g)?;
    let mu = g * g;
    // mu' = sqrt(1 - G^4), formed without cancellation
    let mu_p = ((1.0 - g) * (1.0 + g) * (1.0 + mu)).sqrt();
    let k = EllipticModulus::from_complement(mu_p)?.complete_k();
    let k_p = EllipticModulus::from_complement(mu)?.complete_k();
    Ok((-std::f64::consts::PI * k_p / (2.0 * k)).exp())
}

/// Bounds `(2 rho^m / (1 + rho^m), 2 rho^m)` on the Zolotarev
/// equioscillation error.
pub fn zolotarev_error_bounds(m: usize, g: f64) -> Result<(f64, f64)> {
    check_m(m)?;
    let q = zolotarev_nome(g)?.powi(m as i32);
    Ok((2.0 * q / (1.0 + q), 2.0 * q))
}

/// The Zolotarev equioscillation error `E'` exactly, from the theta
/// functions at nome `Q = rho^m`:
/// `E' = (theta3 - theta4)(theta3 + theta4) / (2 (theta3^2 + theta4^2))`.
///
/// The sums `theta3 +- theta4` are accumulated separately over even and
/// odd indices, so `E'` keeps full relative accuracy however small it is.
pub fn zolotarev_exact_error(m: usize, g: f64) -> Result<f64> {
    check_m(m)?;
    let q = zolotarev_nome(g)?.powi(m as i32);
    let log_q = q.ln();
    let mut odd = 0.0; // (theta3 - theta4) / 4
    let mut even = 0.0; // (theta3 + theta4 - 2) / 4
    for n in 1..100_000u64 {
        let term = ((n * n) as f64 * log_q).exp();
        if n % 2 == 1 {
            odd += term;
        } else {
            even += term;
        }
        if term <= 1e-18 * odd {
            break;
        }
    }
    let minus = 4.0 * odd;
    let plus = 2.0 + 4.0 * even;
    Ok(plus * minus / (plus * plus + minus * minus))
}

/// Worst-case factor `E' / (1 - E')` of the Zolotarev filter with gap `G`.
pub fn zolotarev_factor(m: usize, g: f64) -> Result<f64> {
    let e = zolotarev_exact_error(m, g)?;
    Ok(e / (1.0 - e))
}

/// Elementary estimate `exp(-m pi^2 / (2 ln(16 / (1 - G^4))))` of the
/// Zolotarev error, accurate as `G -> 1`.
pub fn zolotarev_asymptotic_error(m: usize, g: f64) -> Result<f64> {
    check_m(m)?;
    check_gap(g)?;
    let one_minus_g4 = (1.0 - g) * (1.0 + g) * (1.0 + g * g);
    let pi2 = std::f64::consts::PI.powi(2);
    Ok((-(m as f64) * pi2 / (2.0 * (16.0 / one_minus_g4).ln())).exp())
}

fn check_m(m: usize) -> Result<()> {
    if m == 0 {
        Err(Error::InvalidSpec(
            "half-degree m must be at least 1".into(),
        ))
    } else {
        Ok(())
    }
}

/// Local extrema of the error `ind(x) - r(x)` found by dense sampling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Equioscillation {
    /// Signed error at each extremum, interior extrema first (ascending
    /// `x`), then exterior extrema in ascending `u = 1/x`.
    pub extrema: Vec<f64>,
    /// Largest extremal magnitude, the measured `E'`.
    pub amplitude: f64,
    /// `(max - min) / max` over the extremal magnitudes.
    pub spread: f64,
    /// Whether consecutive extrema alternate in sign within each region.
    pub alternating: bool,
}

/// Locate the extrema of `ind - r` on `[-G, G]` and on `|x| >= 1/G`
/// (including `x = +-inf` through `u = 0`).
pub fn equioscillation(filter: &RationalFilter, g: f64) -> Result<Equioscillation> {
    check_gap(g)?;
    let t = g.atanh();
    let interior = signed_extrema(|tau| 1.0 - filter.eval_real(tau.tanh()), -t, t);
    let exterior = signed_extrema(|tau| -filter.eval_at_inverse(tau.tanh()), -t, t);
    let alternates = |v: &[f64]| v.windows(2).all(|w| w[0] * w[1] < 0.0);
    let alternating = alternates(&interior) && alternates(&exterior);
    let extrema: Vec<f64> = interior.into_iter().chain(exterior).collect();
    let mags = extrema.iter().map(|v| v.abs());
    let amplitude = mags.clone().fold(0.0, f64::max);
    let smallest = mags.fold(f64::INFINITY, f64::min);
    Ok(Equioscillation {
        spread: if amplitude > 0.0 {
            (amplitude - smallest) / amplitude
        } else {
            0.0
        },
        amplitude,
        alternating,
        extrema,
    })
}

/// Signed values at the local maxima of `|e|` on `[a, b]`, endpoints
/// included when they are local maxima.
fn signed_extrema<F: Fn(f64) -> f64>(e: F, a: f64, b: f64) -> Vec<f64> {
    const N: usize = 16384;
    let h = (b - a) / N as f64;
    let xs: Vec<f64> = (0..=N)
        .map(|i| if i == N { b } else { a + h * i as f64 })
        .collect();
    let vals: Vec<f64> = xs.iter().map(|&x| e(x)).collect();
    let mag: Vec<f64> = vals.iter().map(|v| v.abs()).collect();
    let mut out = Vec::new();
    if mag[0] >= mag[1] {
        out.push(vals[0]);
    }
    for i in 1..N {
        if mag[i] > mag[i - 1] && mag[i] >= mag[i + 1] {
            let (x, _) = golden_section(|x| e(x).abs(), xs[i - 1], xs[i + 1], 1e-12, Goal::Max);
            let v = e(x);
            out.push(if v.abs() >= vals[i].abs() { v } else { vals[i] });
        }
    }
    if mag[N] >= mag[N - 1] {
        out.push(vals[N]);
    }
    out
}

/// One row of the factor table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub g: f64,
    pub m: usize,
    pub trap_inf: f64,
    pub trap_nat: f64,
    pub trap_opt: f64,
    pub trap_opt_s: Shape,
    pub gauss_inf: f64,
    pub gauss_opt: f64,
    pub gauss_opt_s: Shape,
    pub zolotarev: f64,
}

/// Worst-case factors for every `(G, m)` pair, rows in input order
/// (`G` outer, `m` inner). Cells are computed in parallel.
///
/// The Zolotarev column uses the exact theta-function value of `E'`, since
/// sampling the partial-fraction form cannot resolve factors much below
/// `1e-13`.
pub fn table_one(g_list: &[f64], m_list: &[usize]) -> Result<Vec<TableRow>> {
    if g_list.is_empty() || m_list.is_empty() {
        return Err(Error::Config(
            "factor table needs at least one G and one m".into(),
        ));
    }
    for &g in g_list {
        check_gap(g)?;
    }
    for &m in m_list {
        check_m(m)?;
    }
    let cells: Vec<(f64, usize)> = g_list
        .iter()
        .flat_map(|&g| m_list.iter().map(move |&m| (g, m)))
        .collect();
    cells.par_iter().map(|&(g, m)| table_row(g, m)).collect()
}

fn table_row(g: f64, m: usize) -> Result<TableRow> {
    let trap_inf = worst_case_factor(&build_trapezoid_filter(m, Shape::Infinite)?, g)?;
    let trap_nat = worst_case_factor(&build_trapezoid_filter(m, Shape::Finite(natural_s(g)?))?, g)?;
    let trap_opt = optimize_s(FilterKind::Trapezoid, m, g)?;
    let gauss_inf = worst_case_factor(&build_gauss_filter(m, Shape::Infinite)?, g)?;
    let gauss_opt = optimize_s(FilterKind::Gauss, m, g)?;
    Ok(TableRow {
        g,
        m,
        trap_inf,
        trap_nat,
        trap_opt: trap_opt.factor,
        trap_opt_s: trap_opt.shape,
        gauss_inf,
        gauss_opt: gauss_opt.factor,
        gauss_opt_s: gauss_opt.shape,
        zolotarev: zolotarev_factor(m, g)?,
    })
}

/// CSV header of [`table_csv`].
pub const TABLE_HEADER: &str =
    "G,m,trap_inf,trap_nat,trap_opt,trap_opt_S,gauss_inf,gauss_opt,gauss_opt_S,zolotarev";

/// The table as CSV: factors with three significant digits, shapes with
/// three significant digits or `inf`.
pub fn table_csv(rows: &[TableRow]) -> String {
    let mut out = String::from(TABLE_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{:.2e},{:.2e},{:.2e},{},{:.2e},{:.2e},{},{:.2e}\n",
            r.g,
            r.m,
            r.trap_inf,
            r.trap_nat,
            r.trap_opt,
            format_shape(r.trap_opt_s),
            r.gauss_inf,
            r.gauss_opt,
            format_shape(r.gauss_opt_s),
            r.zolotarev
        ));
    }
    out
}

/// Shape rounded to three significant digits.
pub fn format_shape(shape: Shape) -> String {
    match shape {
        Shape::Infinite => "inf".into(),
        Shape::Finite(s) => {
            let digits = 2 - s.abs().log10().floor() as i32;
            format!("{:.*}", digits.max(0) as usize, s)
        }
    }
}
