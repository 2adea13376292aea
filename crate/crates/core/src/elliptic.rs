//! Complete elliptic integral of the first kind and the Jacobi elliptic
//! functions `sn`, `cn`, `dn` on the real segment `[0, K]`.
//!
//! Everything here is parameterized by the modulus `k`, never by the
//! parameter `m = k^2`. Entry points ending in `_comp` take the complementary
//! modulus `k' = sqrt(1 - k^2)` instead; use them whenever `k` is within a
//! few ulps of one (Zolotarev filters with `R = 1e6` have `k' = 1e-6`, and
//! `1 - k` is then not representable with any useful accuracy).

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use crate::{Error, Result};

const MAX_AGM_STEPS: usize = 64;

/// Elliptic modulus with its complement stored side by side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticModulus {
    k: f64,
    kp: f64,
}

impl EllipticModulus {
    /// Build from the modulus, `0 <= k < 1`.
    pub fn new(k: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&k) {
            return Err(Error::Domain {
                what: "elliptic modulus",
                value: k,
                expected: "0 <= k < 1",
            });
        }
        Ok(Self {
            k,
            kp: ((1.0 - k) * (1.0 + k)).sqrt(),
        })
    }

    /// Build from the complementary modulus, `0 < k' <= 1`.
    pub fn from_complement(kp: f64) -> Result<Self> {
        if !(kp > 0.0 && kp <= 1.0) {
            return Err(Error::Domain {
                what: "complementary elliptic modulus",
                value: kp,
                expected: "0 < k' <= 1",
            });
        }
        Ok(Self {
            k: ((1.0 - kp) * (1.0 + kp)).sqrt(),
            kp,
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn kp(&self) -> f64 {
        self.kp
    }

    /// `K(k)` by the arithmetic-geometric mean, `K = pi / (2 agm(1, k'))`.
    pub fn complete_k(&self) -> f64 {
        FRAC_PI_2 / agm(1.0, self.kp)
    }

    /// `K(k')`, the complete integral of the complementary modulus.
    pub fn complete_k_prime(&self) -> f64 {
        FRAC_PI_2 / agm(1.0, self.k)
    }

    /// `(sn, cn, dn)` at `w` in `[0, K]`.
    ///
    /// The upper half of the range is reduced with the quarter-period
    /// reflection `sn(K - u) = cn(u)/dn(u)`, `cn(K - u) = k' sn(u)/dn(u)`,
    /// `dn(K - u) = k'/dn(u)` so the Landen recursion only ever sees
    /// `u <= K/2`, where `cn` and `dn` are bounded away from zero.
    pub fn sn_cn_dn(&self, w: f64) -> Result<(f64, f64, f64)> {
        let big_k = self.check_argument(w)?;
        let half = 0.5 * big_k;
        if w <= half {
            Ok(landen(w, self.k, self.kp))
        } else {
            let u = (big_k - w).max(0.0);
            let (sn, cn, dn) = landen(u, self.k, self.kp);
            Ok((cn / dn, self.kp * sn / dn, self.kp / dn))
        }
    }

    pub fn sn(&self, w: f64) -> Result<f64> {
        Ok(self.sn_cn_dn(w)?.0)
    }

    /// `sn^2(w) / cn^2(w)`, evaluated without forming `1 - sn^2`.
    ///
    /// Diverges at `w = K`; callers must stay strictly below it.
    ///
    /// For `k' <= 1/sqrt 2` the value comes from theta series in the
    /// complementary nome (see [`sc_theta`]); the Landen recursion loses
    /// digits there because its `asin` arguments approach one.
    pub fn sc_squared(&self, w: f64) -> Result<f64> {
        let big_k = self.check_argument(w)?;
        let (u, reflect) = if w <= 0.5 * big_k {
            (w, false)
        } else {
            ((big_k - w).max(0.0), true)
        };
        let sc = if self.kp <= FRAC_1_SQRT_2 {
            sc_theta(u, big_k, self.complete_k_prime())
        } else {
            let (sn, cn, _) = landen(u, self.k, self.kp);
            sn / cn
        };
        // sc(w) sc(K - w) = 1/k'
        Ok(if reflect {
            (self.kp * sc).powi(-2)
        } else {
            sc * sc
        })
    }

    fn check_argument(&self, w: f64) -> Result<f64> {
        let big_k = self.complete_k();
        if !(w >= 0.0 && w <= big_k * (1.0 + 4.0 * f64::EPSILON)) {
            return Err(Error::Domain {
                what: "elliptic argument",
                value: w,
                expected: "0 <= w <= K(k)",
            });
        }
        Ok(big_k)
    }
}

/// Complete elliptic integral of the first kind for modulus `kappa`.
pub fn complete_elliptic_k(kappa: f64) -> Result<f64> {
    Ok(EllipticModulus::new(kappa)?.complete_k())
}

/// Complete elliptic integral of the first kind given the complementary
/// modulus `kp = sqrt(1 - kappa^2)`.
pub fn complete_elliptic_k_comp(kp: f64) -> Result<f64> {
    Ok(EllipticModulus::from_complement(kp)?.complete_k())
}

/// Jacobi `sn(w; kappa)` for `0 <= w <= K(kappa)`.
pub fn jacobi_sn(w: f64, kappa: f64) -> Result<f64> {
    EllipticModulus::new(kappa)?.sn(w)
}

/// Jacobi `sn` given the complementary modulus.
pub fn jacobi_sn_comp(w: f64, kp: f64) -> Result<f64> {
    EllipticModulus::from_complement(kp)?.sn(w)
}

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..MAX_AGM_STEPS {
        if (a - b).abs() <= f64::EPSILON * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    0.5 * (a + b)
}

/// `sc(u; k)` for `0 <= u <= K/2` from the imaginary transformation
/// `sc(u; k) = -i sn(iu; k')` and the theta quotient for `sn`, with nome
/// `q = exp(-pi K / K')` and `y = pi u / (2 K')`:
///
/// ```text
/// sc = theta3(q) sum_n (-1)^n q^(n(n+1)) sinh((2n+1) y)
///      / ( sum_n q^(n(n+1)) * (1 + 2 sum_{n>=1} (-1)^n q^(n^2) cosh(2ny)) )
/// ```
///
/// (the common factor `q^(1/4)` of `theta1` and `theta2` cancelled).
/// Since `e^(2y) <= q^(-1/2)` on this range, every series is dominated by
/// its first term.
fn sc_theta(u: f64, big_k: f64, big_kp: f64) -> f64 {
    let t = PI * big_k / big_kp;
    let y = PI * u / (2.0 * big_kp);
    let term = |e: f64| (-t * e).exp();
    let (mut theta3, mut theta2, mut num, mut den) = (1.0, 1.0, y.sinh(), 1.0);
    for n in 1..64 {
        let nf = n as f64;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let a = term(nf * (nf + 1.0));
        let b = term(nf * nf);
        // the largest new contribution, q^(n^2) e^(2ny), bounds the tail
        let big = (2.0 * nf * y - t * nf * nf).exp();
        theta3 += 2.0 * b;
        theta2 += a;
        num += sign * a * ((2.0 * nf + 1.0) * y).sinh();
        den += 2.0 * sign * b * (2.0 * nf * y).cosh();
        if big < 1e-18 && b < 1e-18 {
            break;
        }
    }
    theta3 * num / (theta2 * den)
}

/// Descending Landen (AGM) scheme for `sn`, `cn`, `dn`.
fn landen(u: f64, k: f64, kp: f64) -> (f64, f64, f64) {
    if k == 0.0 {
        return (u.sin(), u.cos(), 1.0);
    }
    let mut a = vec![1.0];
    let mut c = vec![k];
    let mut b = kp;
    while c.len() < MAX_AGM_STEPS {
        let n = a.len() - 1;
        if c[n].abs() <= f64::EPSILON * a[n] {
            break;
        }
        let an = a[n];
        a.push(0.5 * (an + b));
        c.push(0.5 * (an - b));
        b = (an * b).sqrt();
    }
    let steps = a.len() - 1;
    let mut phi = (1u64 << steps) as f64 * a[steps] * u;
    let mut phi_above = phi;
    for n in (1..=steps).rev() {
        phi_above = phi;
        phi = 0.5 * (phi + (c[n] / a[n] * phi.sin()).asin());
    }
    let (sn, cn) = phi.sin_cos();
    let dn = if steps == 0 {
        (1.0 - (k * sn).powi(2)).sqrt()
    } else {
        cn / (phi_above - phi).cos()
    };
    (sn, cn, dn)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn k_at_zero_is_half_pi() {
        assert_eq!(complete_elliptic_k(0.0).unwrap(), PI / 2.0);
    }

    #[test]
    fn k_rejects_out_of_range() {
        assert!(complete_elliptic_k(1.0).is_err());
        assert!(complete_elliptic_k(-0.1).is_err());
        assert!(complete_elliptic_k(f64::NAN).is_err());
        assert!(complete_elliptic_k_comp(0.0).is_err());
    }

    #[test]
    fn k_increases_towards_one() {
        let a = complete_elliptic_k(0.99).unwrap();
        let b = complete_elliptic_k(0.999999).unwrap();
        assert!(b > a);
        // Leading asymptotic term ln(4/k').
        let kp = 1e-12;
        let big_k = complete_elliptic_k_comp(kp).unwrap();
        assert!((big_k - (4.0 / kp).ln()).abs() < 1e-10);
    }

    #[test]
    fn sn_trig_limit() {
        for &w in &[0.0, 0.1, 0.7, 1.2, PI / 2.0] {
            assert!((jacobi_sn(w, 0.0).unwrap() - w.sin()).abs() < 1e-15);
        }
    }

    #[test]
    fn sn_at_quarter_period_is_one() {
        for &k in &[0.0, 0.5, 0.9, 0.99, 0.999999] {
            let m = EllipticModulus::new(k).unwrap();
            assert!(
                (m.sn(m.complete_k()).unwrap() - 1.0).abs() < 1e-10,
                "k = {k}"
            );
        }
        let m = EllipticModulus::from_complement(1e-6).unwrap();
        assert!((m.sn(m.complete_k()).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn sn_is_increasing() {
        for &kp in &[1.0, 0.8, 0.3, 1e-3, 1e-6, 1e-10] {
            let m = EllipticModulus::from_complement(kp).unwrap();
            let big_k = m.complete_k();
            let mut prev = -1.0;
            for i in 0..=400 {
                let s = m.sn(big_k * i as f64 / 400.0).unwrap();
                // near w = K with tiny k', sn sits within a few ulps of 1 and
                // neighbouring samples may round to the same or an adjacent double
                assert!(
                    s > prev || (prev - s <= 4.0 * f64::EPSILON && 1.0 - s < 1e-14),
                    "kp = {kp}, i = {i}"
                );
                prev = s;
            }
        }
    }

    #[test]
    fn pythagorean_identities() {
        let m = EllipticModulus::new(0.93).unwrap();
        let big_k = m.complete_k();
        for i in 0..=20 {
            let (sn, cn, dn) = m.sn_cn_dn(big_k * i as f64 / 20.0).unwrap();
            assert!((sn * sn + cn * cn - 1.0).abs() < 1e-14);
            assert!((dn * dn + m.k() * m.k() * sn * sn - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn sc_squared_reflection_identity() {
        // sc^2(w) sc^2(K - w) = 1 / k'^2
        let m = EllipticModulus::from_complement(1e-4).unwrap();
        let big_k = m.complete_k();
        for j in 1..8 {
            let w = big_k * j as f64 / 8.0;
            let prod = m.sc_squared(w).unwrap() * m.sc_squared(big_k - w).unwrap();
            assert!((prod * 1e-8 - 1.0).abs() < 1e-12, "j = {j}");
        }
    }

    #[test]
    fn argument_outside_quarter_period_rejected() {
        let m = EllipticModulus::new(0.5).unwrap();
        assert!(m.sn(-1e-3).is_err());
        assert!(m.sn(m.complete_k() * 1.01).is_err());
    }
}
