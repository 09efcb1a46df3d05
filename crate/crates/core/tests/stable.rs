use std::f64::consts::E;

use mlineq::gamma::log_gamma;
use mlineq::stable::{
    hitting_time_from, laplace_check, mc_ml_estimate, mc_superadditivity, sample_hitting_time, sample_positive_stable,
    self_similarity_check, stable_draws,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::erf::erfc;

const SEED: u64 = 42;

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

#[test]
fn half_stable_matches_levy_law() {
    let n = 100_000;
    let mut draws = stable_draws(0.5, SEED, 11, n).unwrap();
    assert!(draws.iter().all(|&z| z > 0.0));
    draws.sort_by(f64::total_cmp);
    let nf = n as f64;
    let d = draws
        .iter()
        .enumerate()
        .map(|(i, &z)| {
            let cdf = erfc(1.0 / (2.0 * z.sqrt()));
            (cdf - i as f64 / nf).abs().max(((i + 1) as f64 / nf - cdf).abs())
        })
        .fold(0.0, f64::max);
    assert!(d < 1.9495 / nf.sqrt(), "KS statistic {d}");
}

#[test]
fn half_order_representation_moment() {
    // E e^{√2|N|} = 2e Φ(√2) = E_{1/2}(1)
    let target = 2.0 * E * Normal::new(0.0, 1.0).unwrap().cdf(2f64.sqrt());
    let s = mc_ml_estimate(0.5, 1.0, 200_000, SEED).unwrap();
    assert!((s.target - target).abs() < 1e-10);
    assert!(s.z_score.abs() <= 4.0, "{s:?}");
    assert!(!s.variance_warning);
}

#[test]
fn representation_estimates() {
    for &(alpha, x) in &[(0.5, 1.0), (0.7, 0.5), (0.3, 1.5)] {
        let s = mc_ml_estimate(alpha, x, 200_000, SEED).unwrap();
        assert!(s.z_score.abs() <= 4.0, "alpha={alpha} x={x}: {s:?}");
        assert_eq!(s.n, 200_000);
        assert_eq!(s.seed, SEED);
    }
    let s = mc_ml_estimate(0.5, 1e-9, 10_000, SEED).unwrap();
    assert!((s.mean - 1.0).abs() < 1e-3);
    assert!(mc_ml_estimate(0.5, 2.0, 1000, SEED).is_err());
    assert!(mc_ml_estimate(1.2, 1.0, 1000, SEED).is_err());
}

#[test]
fn laplace_grid() {
    for &alpha in &[0.3, 0.5, 0.7, 0.9] {
        for &lambda in &[0.5, 1.0, 2.0] {
            let s = laplace_check(alpha, lambda, 200_000, SEED).unwrap();
            assert!(s.z_score.abs() <= 4.0, "alpha={alpha} lambda={lambda}: {s:?}");
        }
    }
    let s = laplace_check(0.5, 1.0, 200_000, SEED).unwrap();
    assert!((s.target - (-1f64).exp()).abs() < 1e-15);
}

#[test]
fn hitting_time_mean() {
    let n = 200_000;
    for &(alpha, x) in &[(0.5, 1.0), (0.7, 2.0), (0.3, 0.5)] {
        let r: Vec<f64> = stable_draws(alpha, SEED, 12, n)
            .unwrap()
            .into_iter()
            .map(|z| hitting_time_from(alpha, x, z))
            .collect();
        let nf = n as f64;
        let mean = r.iter().sum::<f64>() / nf;
        let var = r.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (nf - 1.0);
        let want = x.powf(alpha) / log_gamma(1.0 + alpha).unwrap().exp();
        assert!(
            (mean - want).abs() <= 4.0 * (var / nf).sqrt(),
            "alpha={alpha} x={x}: {mean} vs {want}"
        );
    }
}

#[test]
fn self_similarity() {
    for &(alpha, x) in &[(0.5, 2.0), (0.3, 0.4), (0.8, 1.5)] {
        let ks = self_similarity_check(alpha, x, 100_000, SEED).unwrap();
        assert!(ks.passes(), "alpha={alpha} x={x}: {ks:?}");
    }
}

#[test]
fn dominance() {
    let t_grid: Vec<f64> = (1..=20).map(|i| i as f64 * 0.25).collect();
    let rep = mc_superadditivity(0.5, 1.0, 1.0, 100_000, SEED, &t_grid).unwrap();
    assert!(rep.within(3.0), "{rep:?}");
    assert!(rep.max_violation <= 3.0 * rep.binomial_stderr_bound);
    let (diff, se) = rep.consequence();
    assert!(diff >= -4.0 * se);
    for curve in [&rep.survival_sum, &rep.survival_direct] {
        assert!(curve.iter().all(|&p| (0.0..=1.0).contains(&p)));
        assert!(curve.windows(2).all(|w| w[1] <= w[0]));
    }
}

#[test]
fn dominance_degenerate_second_leg() {
    let t_grid = [0.1, 0.5, 1.0, 2.0];
    let rep = mc_superadditivity(0.6, 1.0, 1e-12, 100_000, SEED, &t_grid).unwrap();
    for (i, t) in t_grid.iter().enumerate() {
        let gap = (rep.survival_sum[i] - rep.survival_direct[i]).abs();
        assert!(gap <= 4.0 * rep.stderr[i], "t={t}: gap {gap}");
    }
}

#[test]
fn reproducible_across_workers() {
    let one = in_pool(1, || mc_ml_estimate(0.6, 1.2, 50_000, 7).unwrap());
    let many = in_pool(4, || mc_ml_estimate(0.6, 1.2, 50_000, 7).unwrap());
    assert_eq!(one, many);
    let a = in_pool(1, || stable_draws(0.4, 9, 3, 10_000).unwrap());
    let b = in_pool(3, || stable_draws(0.4, 9, 3, 10_000).unwrap());
    assert_eq!(a, b);
    let t = [0.5, 1.0, 2.0];
    let r1 = in_pool(1, || mc_superadditivity(0.5, 0.5, 0.7, 20_000, 5, &t).unwrap());
    let r4 = in_pool(4, || mc_superadditivity(0.5, 0.5, 0.7, 20_000, 5, &t).unwrap());
    assert_eq!(r1, r4);
    assert_ne!(
        stable_draws(0.4, 9, 3, 100).unwrap(),
        stable_draws(0.4, 10, 3, 100).unwrap()
    );
}

#[test]
fn prefix_stable() {
    let long = stable_draws(0.5, SEED, 1, 10_000).unwrap();
    let short = stable_draws(0.5, SEED, 1, 5_000).unwrap();
    assert_eq!(&long[..5_000], &short[..]);
}

proptest! {
    #[test]
    fn draws_positive(alpha in 0.05f64..0.99, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..200 {
            let z = sample_positive_stable(alpha, &mut rng).unwrap();
            prop_assert!(z > 0.0 && z.is_finite());
            let r = sample_hitting_time(alpha, 1.0, &mut rng).unwrap();
            prop_assert!(r > 0.0);
        }
    }

    #[test]
    fn hitting_time_increasing(alpha in 0.05f64..0.99, z in 1e-3f64..1e3, x in 0.01f64..10.0, dx in 0.01f64..1.0) {
        prop_assert!(hitting_time_from(alpha, x + dx, z) > hitting_time_from(alpha, x, z));
    }
}
