//! Zolotarev filter: the best uniform rational approximant `s` of type
//! `(2m-1, 2m)` to `sign(x)` on `[-R, -1] U [1, R]`, composed with the
//! Moebius map `t(z) = sqrt(R) (1 + z) / (1 - z)`, which sends `[-G, G]`
//! onto `[1, R]` and `|z| >= 1/G` onto `[-R, -1]` for
//! `G = (sqrt(R) - 1)/(sqrt(R) + 1)`, and shifted to `r = (s(t) + 1) / 2`.
//!
//! `s(x) = D x prod_{j<m}(x^2 + c_{2j}) / prod_{j<=m}(x^2 + c_{2j-1})` with
//! `c_j = sc^2(j K / (2m); k)`, `k' = 1/R`. The poles `+-i sqrt(c_{2k-1})`
//! of `s` map to unit-modulus poles of `r`; their residues are real and
//! given by the factored-denominator derivative, so no polynomial
//! coefficients are ever formed.

use num_complex::Complex64;

use super::{FilterKind, FilterSpec, RationalFilter, Shape};
use crate::elliptic::EllipticModulus;
use crate::search::{grid_extremum, Goal};
use crate::{Error, Result};

/// Tolerance for the `|z_j| = 1` sanity check on the computed poles.
const UNIT_CIRCLE_TOL: f64 = 1e-10;

/// The Zolotarev filter of half-degree `m` for range `R > 1`.
pub fn build_zolotarev_filter(m: usize, r: f64) -> Result<RationalFilter> {
    let spec = FilterSpec::new(FilterKind::Zolotarev, m, Shape::Finite(r))?;
    let core = ZolotarevCore::new(m, r)?;
    let sqrt_r = r.sqrt();

    let mut upper = Vec::with_capacity(m);
    for k in 1..=m {
        let c = core.c[2 * k - 1];
        let z = Complex64::new((c - r) / (c + r), 2.0 * (c * r).sqrt() / (c + r));
        if (z.norm() - 1.0).abs() > UNIT_CIRCLE_TOL || !z.re.is_finite() {
            return Err(Error::PrecisionLoss(format!(
                "pole {z} of the m = {m}, R = {r} filter is off the unit circle"
            )));
        }
        let rho = core.residue(k);
        let one_minus = Complex64::new(1.0, 0.0) - z;
        let w = -rho * one_minus * one_minus / (4.0 * sqrt_r);
        upper.push((z, w));
    }
    let constant = 0.5 * (1.0 - core.d * core.p(sqrt_r));
    if !(constant.is_finite()
        && upper
            .iter()
            .all(|(_, w)| w.re.is_finite() && w.im.is_finite()))
    {
        return Err(Error::PrecisionLoss(format!(
            "non-finite weights for the m = {m}, R = {r} filter"
        )));
    }
    Ok(RationalFilter::from_upper_half(spec, upper, constant))
}

/// Unnormalized data of `s`: the coefficients `c_1..c_{2m-1}` (index 0
/// unused) and the normalization `D`.
struct ZolotarevCore {
    m: usize,
    c: Vec<f64>,
    d: f64,
}

impl ZolotarevCore {
    fn new(m: usize, r: f64) -> Result<Self> {
        let modulus = EllipticModulus::from_complement(1.0 / r)?;
        let big_k = modulus.complete_k();
        let mut c = vec![0.0; 2 * m];
        for (j, cj) in c.iter_mut().enumerate().skip(1) {
            *cj = modulus.sc_squared(j as f64 * big_k / (2 * m) as f64)?;
        }
        if c.iter().skip(1).any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(Error::PrecisionLoss(format!(
                "Zolotarev coefficients for m = {m}, R = {r} are not positive and finite"
            )));
        }
        let mut core = Self { m, c, d: 1.0 };

        // s(R/x) = s(x), so the ripple on [1, R] is fully seen on [1, sqrt R].
        let top = 0.5 * r.ln();
        let samples = 4096.max(64 * m);
        let refine = 2 * m + 4;
        let f = |v: f64| core.p(v.exp());
        let (_, lo) = grid_extremum(f, 0.0, top, samples, refine, 1e-13, Goal::Min);
        let (_, hi) = grid_extremum(f, 0.0, top, samples, refine, 1e-13, Goal::Max);
        core.d = 2.0 / (lo + hi);
        if !(core.d.is_finite() && core.d > 0.0) {
            return Err(Error::PrecisionLoss(format!(
                "normalization for m = {m}, R = {r} is not finite"
            )));
        }
        Ok(core)
    }

    /// `x prod_{j<m}(x^2 + c_{2j}) / prod_{j<=m}(x^2 + c_{2j-1})`, with the
    /// factors interleaved as ratios so nothing overflows.
    fn p(&self, x: f64) -> f64 {
        let x2 = x * x;
        let mut acc = x / (x2 + self.c[2 * self.m - 1]);
        for j in 1..self.m {
            acc *= (x2 + self.c[2 * j]) / (x2 + self.c[2 * j - 1]);
        }
        acc
    }

    /// Residue of `s` at `i sqrt(c_{2k-1})` (equal to the one at the
    /// conjugate point):
    /// `(D/2) prod_j (c_{2j} - c_{2k-1}) / prod_{j != k} (c_{2j-1} - c_{2k-1})`.
    fn residue(&self, k: usize) -> f64 {
        let ck = self.c[2 * k - 1];
        let others = (1..=self.m).filter(|&j| j != k).map(|j| self.c[2 * j - 1]);
        let evens = (1..self.m).map(|j| self.c[2 * j]);
        let mut acc = 0.5 * self.d;
        for (even, odd) in evens.zip(others) {
            acc *= (even - ck) / (odd - ck);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gap(r: f64) -> f64 {
        let s = r.sqrt();
        (s - 1.0) / (s + 1.0)
    }

    #[test]
    fn m1_matches_closed_form() {
        for &r in &[4.0, 100.0, 9801.0] {
            let g = gap(r);
            let f = build_zolotarev_filter(1, r).unwrap();
            assert!((f.constant().re + 0.5 * g * g).abs() < 1e-14);
            for &x in &[-3.0, -0.7, 0.0, 0.4, 1.0, 2.5] {
                let expected = -0.5 * g * g + (1.0 + g * g) / (x * x + 1.0);
                assert!(
                    (f.eval_real(x) - expected).abs() < 1e-12,
                    "R = {r}, x = {x}"
                );
            }
            let p = f.poles()[0];
            assert!((p - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn coefficients_are_reciprocal_about_r() {
        let core = ZolotarevCore::new(5, 1e4).unwrap();
        for j in 1..10 {
            let prod = core.c[j] * core.c[10 - j];
            assert!((prod / 1e8 - 1.0).abs() < 1e-11, "j = {j}");
        }
        assert!(core.c.windows(2).skip(1).all(|w| w[0] < w[1]));
    }

    #[test]
    fn poles_on_unit_circle_and_half_at_endpoints() {
        for &(m, r) in &[(3, 1e6), (6, 9801.0), (9, 1e2), (12, 1e6)] {
            let f = build_zolotarev_filter(m, r).unwrap();
            for z in f.poles() {
                assert!((z.norm() - 1.0).abs() < 1e-12);
            }
            assert!((f.eval_real(1.0) - 0.5).abs() < 1e-10);
            assert!((f.eval_real(-1.0) - 0.5).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_bad_range() {
        assert!(build_zolotarev_filter(3, 1.0).is_err());
        assert!(build_zolotarev_filter(3, f64::NAN).is_err());
        assert!(build_zolotarev_filter(0, 10.0).is_err());
    }
}
