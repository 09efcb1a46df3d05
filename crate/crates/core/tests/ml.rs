#![allow(clippy::excessive_precision)]

use std::f64::consts::E;

use mlineq::mittag_leffler::{ml, ml_deriv, ml_power, phi, psi, representation};
use mlineq::QuadratureSpec;
use proptest::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::erf::erfc;
use statrs::function::gamma::ln_gamma;

/// E_{1/2}(z) = e^{z²} erfc(−z)
fn half_order(z: f64) -> f64 {
    (z * z).exp() * erfc(-z)
}

/// Plain series with an independent log-gamma, for x ≥ 0.
fn naive_series(alpha: f64, x: f64) -> f64 {
    let mut sum = 0.0;
    for k in 0..2000 {
        let kf = k as f64;
        let term = if x == 0.0 && k > 0 {
            0.0
        } else {
            (kf * x.ln() - ln_gamma(alpha * kf + 1.0)).exp()
        };
        sum += if k == 0 { 1.0 } else { term };
        if k > 5 && term < 1e-18 * sum {
            break;
        }
    }
    sum
}

// e^{z²} erfc(−z) at 30 digits, frozen
const HALF_ORDER_TABLE: [(f64, f64); 11] = [
    (-2.0, 0.2553956763105057438651),
    (-1.5, 0.3215854164543175023543),
    (-1.0, 0.4275835761558070044108),
    (-0.5, 0.6156903441929258748708),
    (0.0, 1.0),
    (0.5, 1.952360489182557093276),
    (1.0, 5.00898008076228346631),
    (1.5, 18.65388625626273393875),
    (2.0, 108.9409043899779724124),
    (2.5, 1035.814842972622908299),
    (3.0, 16205.98885399958662547),
];

fn close(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol
}

#[test]
fn trivial_values() {
    assert!(close(ml(1.0, 1.0).unwrap().value, E, 1e-14));
    assert!(close(ml(2.0, 4.0).unwrap().value, 2f64.cosh(), 1e-13));
    assert!(close(ml_deriv(1.0, 1.5).unwrap().value, 1.5f64.exp(), 1e-13));
    assert!(close(ml_deriv(2.0, 1.0).unwrap().value, 1f64.sinh() / 2.0, 1e-14));
    assert!(close(ml_deriv(0.6, 0.0).unwrap().value, (-ln_gamma(1.6)).exp(), 1e-14));
    for alpha in [0.1, 0.5, 1.0, 2.7, 9.0] {
        assert_eq!(ml(alpha, 0.0).unwrap().value, 1.0);
        assert_eq!(ml_power(alpha, 0.0).unwrap().value, 1.0);
    }
}

#[test]
fn half_order_against_erfc() {
    assert!(close(ml(0.5, 1.0).unwrap().value, E * erfc(-1.0), 1e-10));
    assert!(close(ml_power(0.5, 4.0).unwrap().value, 4f64.exp() * erfc(-2.0), 1e-10));
    for i in -20..=30 {
        let z = i as f64 * 0.1;
        let got = ml(0.5, z).unwrap().value;
        let want = half_order(z);
        assert!((got - want).abs() <= 5e-10 * want, "z={z}: {got} vs {want}");
    }
    for &(z, want) in &HALF_ORDER_TABLE {
        let got = ml(0.5, z).unwrap().value;
        assert!((got - want).abs() <= 1e-13 * want, "z={z}: {got} vs {want}");
    }
}

#[test]
fn half_order_normal_moment() {
    // E e^{√2|N|} = 2e Φ(√2)
    let phi_cdf = Normal::new(0.0, 1.0).unwrap().cdf(2f64.sqrt());
    assert!(close(ml_power(0.5, 1.0).unwrap().value, 2.0 * E * phi_cdf, 1e-10));
}

#[test]
fn power_closed_forms() {
    for i in 0..=40 {
        let x = i as f64 * 0.125;
        let tol = 1e-10 * x.exp().max(1.0);
        assert!(close(ml_power(1.0, x).unwrap().value, x.exp(), tol), "alpha=1 x={x}");
        assert!(close(ml_power(2.0, x).unwrap().value, x.cosh(), tol), "alpha=2 x={x}");
        let e4 = 0.5 * (x.cos() + x.cosh());
        assert!(close(ml_power(4.0, x).unwrap().value, e4, tol), "alpha=4 x={x}");
    }
    assert!(close(ml_power(4.0, 1.0).unwrap().value, 1.04169147, 1e-8));
}

#[test]
fn general_order_against_naive_series() {
    for &alpha in &[0.3, 0.75, 1.3, 2.5, 3.7, 6.0] {
        for &x in &[0.1, 0.5, 1.0, 2.0, 4.0] {
            let got = ml(alpha, x).unwrap().value;
            let want = naive_series(alpha, x);
            assert!(
                (got - want).abs() <= 1e-12 * want,
                "alpha={alpha} x={x}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn negative_argument_decays() {
    assert!(close(ml(1.0, -3.0).unwrap().value, (-3f64).exp(), 1e-13));
    assert!(close(ml(2.0, -4.0).unwrap().value, 2f64.cos(), 1e-13));
}

#[test]
fn out_of_range_rejected() {
    assert!(ml(0.0, 1.0).is_err());
    assert!(ml(0.5, 51.0).is_err());
    assert!(ml_power(0.5, -1.0).is_err());
    let spec = QuadratureSpec::default();
    assert!(phi(1.2, 1.0, &spec).is_err());
    assert!(psi(0.8, 1.0, &spec).is_err());
    assert!(phi(0.5, 0.0, &spec).is_err());
}

#[test]
fn phi_value() {
    let spec = QuadratureSpec::default();
    let want = 2.0 * E - E * erfc(-1.0);
    assert!(close(phi(0.5, 1.0, &spec).unwrap().value, want, 1e-9));
    assert!(close(phi(0.5, 1.0, &spec).unwrap().value, 0.427583576155807004, 1e-9));
}

#[test]
fn phi_identity_grid() {
    let spec = QuadratureSpec::default();
    for i in 3..=9 {
        let alpha = i as f64 / 10.0;
        for j in 1..=12 {
            let x = j as f64 * 0.25;
            let p = phi(alpha, x, &spec).unwrap().value;
            let series = ml_power(alpha, x).unwrap().value;
            let residual = (x.exp() / alpha - p - series).abs();
            assert!(p >= 0.0);
            assert!(residual <= 1e-8, "alpha={alpha} x={x}: residual {residual}");
        }
    }
}

#[test]
fn psi_identity_grid() {
    let spec = QuadratureSpec::default();
    for i in 11..=19 {
        let alpha = i as f64 / 10.0;
        for j in 1..=12 {
            let x = j as f64 * 0.25;
            let s = psi(alpha, x, &spec).unwrap().value;
            let series = ml_power(alpha, x).unwrap().value;
            let residual = (series.ln() - x + alpha.ln() - s.ln()).abs();
            assert!(residual <= 1e-8, "alpha={alpha} x={x}: residual {residual}");
        }
    }
}

#[test]
fn psi_value_and_range() {
    let spec = QuadratureSpec::default();
    let s = psi(1.5, 1.0, &spec).unwrap().value;
    let want = (ml_power(1.5, 1.0).unwrap().value.ln() - 1.0 + 1.5f64.ln()).exp();
    assert!(close(s, want, 1e-8));
    assert!(close(s, 1.07024623484307, 1e-10));
    assert!(psi(1.1, 0.5, &spec).unwrap().value > 0.0);
}

#[test]
fn representations_decrease() {
    let spec = QuadratureSpec::default();
    assert!(phi(0.4, 2.0, &spec).unwrap().value > phi(0.4, 3.0, &spec).unwrap().value);
    let psis: Vec<f64> = [0.5, 1.0, 2.0, 4.0]
        .iter()
        .map(|&x| psi(1.5, x, &spec).unwrap().value)
        .collect();
    assert!(psis.windows(2).all(|w| w[1] < w[0]), "{psis:?}");
}

#[test]
fn representation_components() {
    let spec = QuadratureSpec::default();
    let r = representation(0.6, 1.5, &spec).unwrap();
    assert!(r.exp_term > 0.0 && r.integral_term >= 0.0);
    assert!(close(r.value(), ml_power(0.6, 1.5).unwrap().value, 1e-8));
    assert!(representation(1.0, 1.0, &spec).is_err());
}

#[test]
fn halving_identity() {
    for i in 11..=19 {
        let alpha = i as f64 / 10.0;
        let beta = alpha / 2.0;
        for j in 1..=12 {
            let x = j as f64 * 0.25;
            let xb = x.powf(beta);
            let half = 0.5 * (ml(beta, xb).unwrap().value + ml(beta, -xb).unwrap().value);
            let direct = ml_power(alpha, x).unwrap().value;
            assert!((half - direct).abs() <= 1e-9 * direct.max(1.0), "alpha={alpha} x={x}");
        }
    }
}

proptest! {
    #[test]
    fn power_is_increasing(alpha in 0.1f64..8.0, x in 0.0f64..10.0, dx in 0.01f64..1.0) {
        let a = ml_power(alpha, x).unwrap().value;
        let b = ml_power(alpha, x + dx).unwrap().value;
        prop_assert!(b > a);
    }

    #[test]
    fn derivative_matches_difference(alpha in 0.3f64..5.0, x in 0.2f64..6.0) {
        let h = 1e-5;
        let fd = (ml(alpha, x + h).unwrap().value - ml(alpha, x - h).unwrap().value) / (2.0 * h);
        let d = ml_deriv(alpha, x).unwrap().value;
        prop_assert!((fd - d).abs() <= 1e-6 * d.abs().max(1.0), "{} vs {}", fd, d);
    }

    #[test]
    fn error_estimate_is_sane(alpha in 0.5f64..6.0, x in -20.0f64..20.0) {
        let r = ml(alpha, x).unwrap();
        prop_assert!(r.value.is_finite());
        prop_assert!(r.abs_error_estimate >= 0.0);
        prop_assert!(r.work >= 1);
    }
}
