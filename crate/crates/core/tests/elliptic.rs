mod common;

use common::{oracle_k, oracle_sn};
use rational_feast::elliptic::{
    complete_elliptic_k, complete_elliptic_k_comp, jacobi_sn, jacobi_sn_comp, EllipticModulus,
};
use rational_feast::Error;

/// Twenty moduli from 0 up to k' = 1e-6, given by their complements.
fn complement_grid() -> Vec<f64> {
    let mut kp: Vec<f64> = (0..14)
        .map(|i| (1.0 - (i as f64 / 14.0).powi(2)).sqrt())
        .collect();
    kp.extend([1e-2, 1e-3, 1e-4, 1e-5, 3e-6, 1e-6]);
    kp
}

#[test]
fn k_matches_quadrature_on_grid() {
    for kp in complement_grid() {
        let got = complete_elliptic_k_comp(kp).unwrap();
        let want = oracle_k(kp);
        assert!(
            ((got - want) / want).abs() < 1e-12,
            "k' = {kp}: {got} vs {want}"
        );
    }
}

#[test]
fn k_at_inverse_sqrt_two() {
    let k = std::f64::consts::FRAC_1_SQRT_2;
    let want = oracle_k(k);
    assert!(((complete_elliptic_k(k).unwrap() - want) / want).abs() < 1e-12);
    // frozen from the quadrature oracle
    assert!((want - 1.854_074_677_301_372).abs() < 1e-14);
}

#[test]
fn k_is_monotone_and_rejects_one() {
    assert!(complete_elliptic_k(0.999999).unwrap() > complete_elliptic_k(0.99).unwrap());
    assert!(matches!(
        complete_elliptic_k(1.0),
        Err(Error::Domain { .. })
    ));
    assert!(matches!(
        complete_elliptic_k(-0.1),
        Err(Error::Domain { .. })
    ));
    assert!(matches!(
        complete_elliptic_k_comp(0.0),
        Err(Error::Domain { .. })
    ));
}

#[test]
fn sn_matches_bisection_oracle() {
    for &kp in &[0.8, 0.3, 1e-2, 1e-4, 1e-6] {
        let m = EllipticModulus::from_complement(kp).unwrap();
        let big_k = m.complete_k();
        for i in 1..10 {
            let w = big_k * i as f64 / 10.0;
            let got = m.sn(w).unwrap();
            let want = oracle_sn(w, kp);
            assert!(
                (got - want).abs() < 1e-12,
                "k' = {kp}, w = {w}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn sn_at_half_period_of_point_nine() {
    let k: f64 = 0.9;
    let kp = ((1.0 - k) * (1.0 + k)).sqrt();
    let w = complete_elliptic_k(k).unwrap() / 2.0;
    let want = oracle_sn(w, kp);
    assert!((jacobi_sn(w, k).unwrap() - want).abs() < 1e-12);
    // sn(K/2) = 1 / sqrt(1 + k')
    assert!((want - 1.0 / (1.0 + kp).sqrt()).abs() < 1e-12);
}

#[test]
fn sn_special_values() {
    for &k in &[0.0, 0.5, 0.9, 0.99, 0.999999] {
        assert_eq!(jacobi_sn(0.0, k).unwrap(), 0.0);
        let big_k = complete_elliptic_k(k).unwrap();
        assert!(
            (jacobi_sn(big_k, k).unwrap() - 1.0).abs() < 1e-10,
            "k = {k}"
        );
    }
    for i in 0..=10 {
        let w = std::f64::consts::FRAC_PI_2 * i as f64 / 10.0;
        assert!((jacobi_sn(w, 0.0).unwrap() - w.sin()).abs() < 1e-15);
    }
    let big_k = complete_elliptic_k_comp(1e-6).unwrap();
    assert!((jacobi_sn_comp(big_k, 1e-6).unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn sc_squared_at_half_period_is_inverse_complement() {
    for &kp in &[0.5, 1e-2, 1e-4, 1e-6] {
        let m = EllipticModulus::from_complement(kp).unwrap();
        let v = m.sc_squared(m.complete_k() / 2.0).unwrap();
        assert!((v * kp - 1.0).abs() < 1e-10, "k' = {kp}: {v}");
    }
}
