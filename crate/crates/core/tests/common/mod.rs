//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's numerical kernels.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rational_feast::linalg::{CMatrix, CsrMatrix, HermitianPencil};

/// 15-point Kronrod nodes and weights on [-1, 1] (positive half, center last)
/// together with the embedded 7-point Gauss weights.
const XK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let x = h * XK[i];
        let s = f(c - x) + f(c + x);
        kron += WK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Adaptive Gauss-Kronrod quadrature to relative tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, whole: f64, depth: usize) -> f64 {
        let (v, err) = gk15(f, a, b);
        if err <= tol * whole.abs().max(1e-300) || depth > 60 || (b - a) < 1e-15 * a.abs().max(1.0)
        {
            return v;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, tol, whole, depth + 1) + rec(f, m, b, tol, whole, depth + 1)
    }
    let (rough, _) = gk15(&f, a, b);
    rec(&f, a, b, tol, rough, 0)
}

/// Incomplete integral `F(phi) = int_0^phi dtheta / sqrt(1 - k^2 sin^2)`,
/// written with `psi = pi/2 - theta` as
/// `int dpsi / sqrt(sin^2 psi + k'^2 cos^2 psi)`. The integrand has a peak
/// of width `k'` at `psi = 0`, so the range is split at `k' 2^j`.
pub fn incomplete_f(phi: f64, kp: f64) -> f64 {
    let f = |p: f64| {
        let (s, c) = p.sin_cos();
        1.0 / (s * s + kp * kp * c * c).sqrt()
    };
    let lo = std::f64::consts::FRAC_PI_2 - phi;
    let hi = std::f64::consts::FRAC_PI_2;
    let mut cuts = vec![lo];
    let mut b = kp;
    while b < hi {
        if b > lo {
            cuts.push(b);
        }
        b *= 2.0;
    }
    cuts.push(hi);
    cuts.windows(2)
        .map(|w| integrate(f, w[0], w[1], 1e-15))
        .sum()
}

/// `K` given the complementary modulus.
pub fn oracle_k(kp: f64) -> f64 {
    incomplete_f(std::f64::consts::FRAC_PI_2, kp)
}

/// `sn(w)` by bisection on the amplitude.
pub fn oracle_sn(w: f64, kp: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, std::f64::consts::FRAC_PI_2);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if incomplete_f(mid, kp) < w {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi)).sin()
}

/// Roots of the expanded `P_5(x) = (63 x^5 - 70 x^3 + 15 x) / 8` by Newton
/// from Chebyshev starting points, with weights `2 / ((1 - x^2) P_5'(x)^2)`.
pub fn legendre5() -> (Vec<f64>, Vec<f64>) {
    let p = |x: f64| (63.0 * x.powi(5) - 70.0 * x.powi(3) + 15.0 * x) / 8.0;
    let dp = |x: f64| (315.0 * x.powi(4) - 210.0 * x * x + 15.0) / 8.0;
    let mut nodes: Vec<f64> = (0..5)
        .map(|i| {
            let mut x = -(std::f64::consts::PI * (i as f64 + 0.75) / 5.25).cos();
            for _ in 0..100 {
                let dx = p(x) / dp(x);
                x -= dx;
                if dx.abs() < 1e-17 {
                    break;
                }
            }
            x
        })
        .collect();
    nodes.sort_by(f64::total_cmp);
    let weights = nodes
        .iter()
        .map(|&x| 2.0 / ((1.0 - x * x) * dp(x).powi(2)))
        .collect();
    (nodes, weights)
}

/// `T_n(x)` for real `x` via cos/cosh.
pub fn chebyshev_t(n: usize, x: f64) -> f64 {
    let n = n as f64;
    if x.abs() <= 1.0 {
        (n * x.acos()).cos()
    } else {
        let v = (n * x.abs().acosh()).cosh();
        if x < 0.0 && (n as i64) % 2 == 1 {
            -v
        } else {
            v
        }
    }
}

/// Trapezoid filter closed form `1 / (alpha + beta T_2m((S + 1/S) z / 2))`.
pub fn trapezoid_oracle(z: f64, m: usize, s: f64) -> f64 {
    let p = s.powi(2 * m as i32);
    let alpha = (p + 1.0 / p) / (p - 1.0 / p);
    let beta = 2.0 / (p - 1.0 / p);
    1.0 / (alpha + beta * chebyshev_t(2 * m, (s + 1.0 / s) * z / 2.0))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Diagonal CSR matrix.
pub fn diag_csr(values: &[f64]) -> CsrMatrix {
    let t: Vec<(usize, usize, Complex64)> = values
        .iter()
        .enumerate()
        .map(|(i, &v)| (i, i, c(v, 0.0)))
        .collect();
    CsrMatrix::from_triplets(values.len(), values.len(), &t).unwrap()
}

/// Generalized diagonal pencil `(diag(a), diag(b))`.
pub fn diag_pencil(a: &[f64], b: &[f64]) -> HermitianPencil {
    HermitianPencil::new(diag_csr(a), Some(diag_csr(b).into())).unwrap()
}

/// Random dense Hermitian matrix with entries of unit scale.
pub fn random_hermitian(n: usize, rng: &mut ChaCha8Rng, complex: bool) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..=j {
            let re = rng.random_range(-1.0..1.0);
            let im = if complex && i != j {
                rng.random_range(-1.0..1.0)
            } else {
                0.0
            };
            m.col_mut(j)[i] = c(re, im);
            m.col_mut(i)[j] = c(re, -im);
        }
    }
    m
}

/// Random Hermitian positive-definite matrix `G^H G + n I`.
pub fn random_hpd(n: usize, rng: &mut ChaCha8Rng, complex: bool) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| {
        c(
            rng.random_range(-1.0..1.0),
            if complex {
                rng.random_range(-1.0..1.0)
            } else {
                0.0
            },
        )
    });
    let mut h = g.adjoint_mul(&g).unwrap();
    for i in 0..n {
        h.col_mut(i)[i] += c(n as f64 * 0.25, 0.0);
    }
    h.hermitian_part()
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `||a - b||_F / ||b||_F`.
pub fn rel_frobenius(a: &CMatrix, b: &CMatrix) -> f64 {
    let num: f64 = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum();
    num.sqrt() / b.frobenius_norm()
}

/// Reference spectrum for the convergence checks: ten eigenvalues spread
/// over `[-G, G]` (`G = 0.98`), a pair at `+-1.005` just outside the search
/// interval `[-1, 1]` (inside the Zolotarev transition band, so they are
/// the `n - l` extra subspace directions for `n = 12`), and forty
/// two-sided pairs from `1/G` outward.
pub fn convergence_spectrum() -> Vec<f64> {
    let g = 0.98;
    let mut ev: Vec<f64> = (0..10).map(|i| -g + 2.0 * g * i as f64 / 9.0).collect();
    ev.extend([-1.005, 1.005, -1.0 / g, 1.0 / g]);
    for i in 1..=40 {
        let v = 1.0 / g + 0.05 * i as f64;
        ev.extend([-v, v]);
    }
    ev
}

/// Spectrum for the two-part load-balancing checks over `[-2, 2]`: a
/// cluster of eight eigenvalues at the shared edge `0` (slightly to its
/// left), six near `-1.8`, eight near `0.3`, and a few far exterior values.
pub fn load_balance_spectrum() -> Vec<f64> {
    let mut ev: Vec<f64> = (0..8).map(|i| -0.04 + 0.035 * i as f64 / 7.0).collect();
    ev.extend((0..6).map(|i| -1.8 + 0.25 * i as f64));
    ev.extend((0..8).map(|i| 0.3 + 0.2 * i as f64));
    ev.extend([-3.0, -4.0, 3.0, 4.0, 5.0]);
    ev
}
