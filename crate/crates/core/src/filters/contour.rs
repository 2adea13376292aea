//! Quadrature filters on the ellipse
//! `gamma(theta) = (S e^{i theta} + S^{-1} e^{-i theta}) / (S + S^{-1})`.
//!
//! With `theta = pi (1 + x) / 2`, `x` in `(-1, 1)`, the upper half of the
//! contour is
//!
//! ```text
//! z(x) = -sin(pi x / 2) + i a cos(pi x / 2),   a = (S^2 - 1) / (S^2 + 1)
//! ```
//!
//! and the Cauchy weight `gamma'(theta) d theta / (2 pi i)` is
//! `(-a sin(pi x / 2) + i cos(pi x / 2))` times the scaled quadrature weight.
//! Mirrored nodes `x -> -x` give `z -> -conj(z)` exactly because sine is odd
//! and cosine is even in floating point, which is the four-fold symmetry.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use super::{gauss_legendre_nodes, FilterKind, FilterSpec, RationalFilter, Shape};
use crate::{Error, Result};

/// Gauss quadrature filter with `m` nodes on each half of the ellipse.
pub fn build_gauss_filter(m: usize, shape: Shape) -> Result<RationalFilter> {
    let spec = FilterSpec::new(FilterKind::Gauss, m, shape)?;
    let (x, w) = gauss_legendre_nodes(m)?;
    // (pi / 2) w_j / (2 pi)
    let scaled: Vec<f64> = w.iter().map(|w| 0.25 * w).collect();
    Ok(assemble(spec, &x, &scaled))
}

/// Trapezoid (midpoint) filter with nodes `theta_j = pi (j - 1/2) / m`.
pub fn build_trapezoid_filter(m: usize, shape: Shape) -> Result<RationalFilter> {
    let spec = FilterSpec::new(FilterKind::Trapezoid, m, shape)?;
    let mf = m as f64;
    let x: Vec<f64> = (1..=m).map(|j| (2.0 * j as f64 - 1.0 - mf) / mf).collect();
    let scaled = vec![0.5 / mf; m];
    Ok(assemble(spec, &x, &scaled))
}

fn assemble(spec: FilterSpec, x: &[f64], scaled_weights: &[f64]) -> RationalFilter {
    let a = match spec.shape {
        Shape::Infinite => 1.0,
        Shape::Finite(s) => {
            let s2 = s * s;
            (s2 - 1.0) / (s2 + 1.0)
        }
    };
    let upper = x
        .iter()
        .zip(scaled_weights)
        .map(|(&x, &w)| {
            let (sin, cos) = (FRAC_PI_2 * x).sin_cos();
            let z = Complex64::new(-sin, a * cos);
            let weight = Complex64::new(-a * sin * w, cos * w);
            (z, weight)
        })
        .collect();
    RationalFilter::from_upper_half(spec, upper, 0.0)
}

/// The trapezoid filter in closed form, `1 / (alpha + beta T_{2m}(y))` with
/// `y = (S + S^{-1}) z / 2`, `alpha = coth(2m ln S)`, `beta = 1/sinh(2m ln S)`.
///
/// For `|y| > 1` the product `beta T_{2m}(y)` is formed from logarithms so
/// neither factor overflows for large `m ln S`.
pub fn trapezoid_closed_form(z: f64, m: usize, s: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidSpec(
            "half-degree m must be at least 1".into(),
        ));
    }
    if !(s > 1.0 && s.is_finite()) {
        return Err(Error::Domain {
            what: "ellipse parameter S",
            value: s,
            expected: "1 < S < inf",
        });
    }
    let n = 2.0 * m as f64;
    let big_l = n * s.ln();
    let alpha = 1.0 / big_l.tanh();
    let y = 0.5 * (s + 1.0 / s) * z;
    let beta_t = if y.abs() <= 1.0 {
        (n * y.acos()).cos() / big_l.sinh()
    } else {
        let t = n * y.abs().acosh();
        // ln cosh t - ln sinh L
        let log = t - big_l + (-2.0 * t).exp().ln_1p() - (-(-2.0 * big_l).exp()).ln_1p();
        log.exp()
    };
    Ok(1.0 / (alpha + beta_t))
}
