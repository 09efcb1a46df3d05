//! Exact sampling of positive α-stable variables (E e^(−λZ) = e^(−λ^α)) and
//! Monte Carlo checks of E_α(x^α) = E[e^(R_x)] for the first-passage time
//! R_x of the stable subordinator above level x.
//!
//! Draw i of stream s under seed σ always reads the same ChaCha8 words
//! (stream s, word position 4i), so results do not depend on how draws are
//! split across workers.

use std::f64::consts::PI;

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::mittag_leffler::ml_power;
use crate::summation::NeumaierSum;

/// Draws per parallel work unit.
const CHUNK: u64 = 4096;
/// 32-bit words consumed per draw (two u64).
const WORDS_PER_DRAW: u128 = 4;
/// Largest level x accepted by [`mc_ml_estimate`].
pub const MC_X_MAX: f64 = 1.5;
/// stderr/mean above which a summary carries a variance warning.
pub const VARIANCE_WARN: f64 = 0.05;

/// Stream ids keeping the purposes of draws apart under one seed.
pub mod streams {
    pub const REPRESENT: u64 = 1;
    pub const LAPLACE: u64 = 2;
    pub const DOMINANCE_X: u64 = 3;
    pub const DOMINANCE_Y: u64 = 4;
    pub const DOMINANCE_XY: u64 = 5;
    pub const SCALING_X: u64 = 6;
    pub const SCALING_ONE: u64 = 7;
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("stable sampling needs 0 < alpha < 1, got {alpha}"));
    }
    Ok(())
}

/// Uniform on the open interval (0, 1) from one u64.
fn open_unit(bits: u64) -> f64 {
    ((bits >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
}

/// Kanter's representation of a positive α-stable law with
/// E e^(−λZ) = e^(−λ^α).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositiveStable {
    alpha: f64,
}

impl PositiveStable {
    pub fn new(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(PositiveStable { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Z from U ∈ (0, π) and E ~ Exp(1):
    /// Z = sin(αU)/sin(U)^(1/α) · (sin((1−α)U)/E)^((1−α)/α)
    pub fn transform(&self, u: f64, e: f64) -> f64 {
        let a = self.alpha;
        let ln_z = (a * u).sin().ln() - u.sin().ln() / a + (1.0 - a) / a * (((1.0 - a) * u).sin().ln() - e.ln());
        ln_z.exp()
    }

    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> f64 {
        let u = PI * open_unit(rng.next_u64());
        let e = -open_unit(rng.next_u64()).ln();
        self.transform(u, e)
    }
}

/// One draw of Z₁.
pub fn sample_positive_stable<R: RngCore + ?Sized>(alpha: f64, rng: &mut R) -> Result<f64> {
    Ok(PositiveStable::new(alpha)?.sample(rng))
}

/// First-passage time above x given a draw z of Z₁: (x/z)^α.
pub fn hitting_time_from(alpha: f64, x: f64, z: f64) -> f64 {
    (x / z).powf(alpha)
}

/// One draw of R_x = inf{t : Z_t > x}, using Z_t =d t^(1/α) Z₁.
pub fn sample_hitting_time<R: RngCore + ?Sized>(alpha: f64, x: f64, rng: &mut R) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("level must be finite and > 0, got {x}"));
    }
    Ok(hitting_time_from(alpha, x, sample_positive_stable(alpha, rng)?))
}

fn stream_rng(seed: u64, stream: u64, first_draw: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.set_word_pos(first_draw as u128 * WORDS_PER_DRAW);
    rng
}

fn chunks(n: u64) -> impl IndexedParallelIterator<Item = (u64, u64)> {
    let count = n.div_ceil(CHUNK) as usize;
    (0..count).into_par_iter().map(move |c| {
        let c = c as u64;
        (c * CHUNK, ((c + 1) * CHUNK).min(n))
    })
}

/// All n draws of Z₁ on one stream, in draw order.
pub fn stable_draws(alpha: f64, seed: u64, stream: u64, n: u64) -> Result<Vec<f64>> {
    let law = PositiveStable::new(alpha)?;
    let parts: Vec<Vec<f64>> = chunks(n)
        .map(|(lo, hi)| {
            let mut rng = stream_rng(seed, stream, lo);
            (lo..hi).map(|_| law.sample(&mut rng)).collect()
        })
        .collect();
    Ok(parts.concat())
}

/// Σ g(Z) and Σ g(Z)² over n draws, reduced in fixed chunk order.
fn moment_sums<G: Fn(f64) -> f64 + Sync>(law: PositiveStable, seed: u64, stream: u64, n: u64, g: G) -> (f64, f64) {
    let parts: Vec<(f64, f64)> = chunks(n)
        .map(|(lo, hi)| {
            let mut rng = stream_rng(seed, stream, lo);
            let mut s = NeumaierSum::new();
            let mut s2 = NeumaierSum::new();
            for _ in lo..hi {
                let v = g(law.sample(&mut rng));
                s.add(v);
                s2.add(v * v);
            }
            (s.value(), s2.value())
        })
        .collect();
    let mut s = NeumaierSum::new();
    let mut s2 = NeumaierSum::new();
    for (a, b) in parts {
        s.add(a);
        s2.add(b);
    }
    (s.value(), s2.value())
}

fn mean_stderr(sum: f64, sum_sq: f64, n: u64) -> (f64, f64) {
    let nf = n as f64;
    let mean = sum / nf;
    let var = if n > 1 {
        ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0)
    } else {
        0.0
    };
    (mean, (var / nf).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MCSummary {
    pub n: u64,
    pub mean: f64,
    pub stderr: f64,
    pub target: f64,
    pub z_score: f64,
    pub seed: u64,
    /// stderr/mean exceeded [`VARIANCE_WARN`]
    pub variance_warning: bool,
}

impl MCSummary {
    fn new(n: u64, mean: f64, stderr: f64, target: f64, seed: u64) -> Self {
        let z_score = if stderr > 0.0 {
            (mean - target) / stderr
        } else if mean == target {
            0.0
        } else {
            (mean - target).signum() * f64::INFINITY
        };
        MCSummary {
            n,
            mean,
            stderr,
            target,
            z_score,
            seed,
            variance_warning: stderr > VARIANCE_WARN * mean.abs(),
        }
    }
}

fn check_n(n: u64) -> Result<()> {
    if n < 2 {
        return domain(format!("need at least 2 samples, got {n}"));
    }
    Ok(())
}

/// Mean of e^(R_x) over n draws, against the series value of E_α(x^α).
pub fn mc_ml_estimate(alpha: f64, x: f64, n: u64, seed: u64) -> Result<MCSummary> {
    let law = PositiveStable::new(alpha)?;
    check_n(n)?;
    if !(0.0..=MC_X_MAX).contains(&x) {
        return domain(format!(
            "x must lie in [0, {MC_X_MAX}] for a controlled variance, got {x}"
        ));
    }
    let target = ml_power(alpha, x)?.value;
    let (s, s2) = moment_sums(law, seed, streams::REPRESENT, n, |z| {
        hitting_time_from(alpha, x, z).exp()
    });
    let (mean, stderr) = mean_stderr(s, s2, n);
    Ok(MCSummary::new(n, mean, stderr, target, seed))
}

/// Mean of e^(−λZ) over n draws, against e^(−λ^α).
pub fn laplace_check(alpha: f64, lambda: f64, n: u64, seed: u64) -> Result<MCSummary> {
    let law = PositiveStable::new(alpha)?;
    check_n(n)?;
    if !(lambda > 0.0) || !lambda.is_finite() {
        return domain(format!("lambda must be finite and > 0, got {lambda}"));
    }
    let (s, s2) = moment_sums(law, seed, streams::LAPLACE, n, |z| (-lambda * z).exp());
    let (mean, stderr) = mean_stderr(s, s2, n);
    Ok(MCSummary::new(n, mean, stderr, (-lambda.powf(alpha)).exp(), seed))
}

/// Empirical survival curves of R_x + R̃_y and R_{x+y} from independent streams.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominanceReport {
    pub alpha: f64,
    pub x: f64,
    pub y: f64,
    pub n: u64,
    pub seed: u64,
    pub t_grid: Vec<f64>,
    /// P(R_x + R̃_y > t)
    pub survival_sum: Vec<f64>,
    /// P(R_{x+y} > t)
    pub survival_direct: Vec<f64>,
    /// √(p₁(1−p₁)/n + p₂(1−p₂)/n) per t
    pub stderr: Vec<f64>,
    /// max over t of survival_direct − survival_sum
    pub max_violation: f64,
    /// max over t of `stderr`
    pub binomial_stderr_bound: f64,
    /// sample means of e^(R_x), e^(R̃_y), e^(R_{x+y}) with their stderrs
    pub mean_exp_x: (f64, f64),
    pub mean_exp_y: (f64, f64),
    pub mean_exp_xy: (f64, f64),
}

impl DominanceReport {
    /// Every t satisfies survival_direct − survival_sum ≤ `sigmas`·stderr(t).
    pub fn within(&self, sigmas: f64) -> bool {
        (0..self.t_grid.len()).all(|i| self.survival_direct[i] - self.survival_sum[i] <= sigmas * self.stderr[i])
    }

    /// mean e^(R_x)·mean e^(R̃_y) − mean e^(R_{x+y}) and its propagated stderr.
    pub fn consequence(&self) -> (f64, f64) {
        let (mx, sx) = self.mean_exp_x;
        let (my, sy) = self.mean_exp_y;
        let (mxy, sxy) = self.mean_exp_xy;
        let diff = mx * my - mxy;
        let se = ((my * sx).powi(2) + (mx * sy).powi(2) + sxy * sxy).sqrt();
        (diff, se)
    }
}

fn survival(sorted: &[f64], t: f64) -> f64 {
    let at_most = sorted.partition_point(|&v| v <= t);
    (sorted.len() - at_most) as f64 / sorted.len() as f64
}

fn exp_moments(values: &[f64]) -> (f64, f64) {
    let mut s = NeumaierSum::new();
    let mut s2 = NeumaierSum::new();
    for &v in values {
        let e = v.exp();
        s.add(e);
        s2.add(e * e);
    }
    mean_stderr(s.value(), s2.value(), values.len() as u64)
}

/// Compares R_x + R̃_y with R_{x+y} in distribution on a grid of thresholds.
pub fn mc_superadditivity(alpha: f64, x: f64, y: f64, n: u64, seed: u64, t_grid: &[f64]) -> Result<DominanceReport> {
    check_alpha(alpha)?;
    check_n(n)?;
    if !(x > 0.0 && y > 0.0) || !(x + y).is_finite() {
        return domain(format!("x and y must be finite and > 0, got ({x}, {y})"));
    }
    if t_grid.is_empty() || t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return domain("t grid must be nonempty and increasing");
    }
    let rx = stable_draws(alpha, seed, streams::DOMINANCE_X, n)?;
    let ry = stable_draws(alpha, seed, streams::DOMINANCE_Y, n)?;
    let rxy = stable_draws(alpha, seed, streams::DOMINANCE_XY, n)?;
    let rx: Vec<f64> = rx.into_iter().map(|z| hitting_time_from(alpha, x, z)).collect();
    let ry: Vec<f64> = ry.into_iter().map(|z| hitting_time_from(alpha, y, z)).collect();
    let mut direct: Vec<f64> = rxy.into_iter().map(|z| hitting_time_from(alpha, x + y, z)).collect();
    let mut sum: Vec<f64> = rx.iter().zip(&ry).map(|(a, b)| a + b).collect();

    let mean_exp_x = exp_moments(&rx);
    let mean_exp_y = exp_moments(&ry);
    let mean_exp_xy = exp_moments(&direct);

    sum.sort_by(f64::total_cmp);
    direct.sort_by(f64::total_cmp);
    let nf = n as f64;
    let survival_sum: Vec<f64> = t_grid.iter().map(|&t| survival(&sum, t)).collect();
    let survival_direct: Vec<f64> = t_grid.iter().map(|&t| survival(&direct, t)).collect();
    let stderr: Vec<f64> = survival_sum
        .iter()
        .zip(&survival_direct)
        .map(|(&p, &q)| (p * (1.0 - p) / nf + q * (1.0 - q) / nf).sqrt())
        .collect();
    let max_violation = survival_direct
        .iter()
        .zip(&survival_sum)
        .map(|(d, s)| d - s)
        .fold(f64::NEG_INFINITY, f64::max);
    let binomial_stderr_bound = stderr.iter().cloned().fold(0.0, f64::max);
    Ok(DominanceReport {
        alpha,
        x,
        y,
        n,
        seed,
        t_grid: t_grid.to_vec(),
        survival_sum,
        survival_direct,
        stderr,
        max_violation,
        binomial_stderr_bound,
        mean_exp_x,
        mean_exp_y,
        mean_exp_xy,
    })
}

/// Two-sample Kolmogorov–Smirnov statistic sup |F_a − F_b|.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let t = a[i].min(b[j]);
        while i < a.len() && a[i] <= t {
            i += 1;
        }
        while j < b.len() && b[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Asymptotic 99.9% critical value of the two-sample KS statistic.
pub fn ks_critical_999(n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    1.9495 * ((n + m) / (n * m)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsReport {
    pub statistic: f64,
    pub critical: f64,
}

impl KsReport {
    pub fn passes(&self) -> bool {
        self.statistic < self.critical
    }
}

/// KS comparison of R_x draws against x^α·R₁ draws from a separate stream.
pub fn self_similarity_check(alpha: f64, x: f64, n: u64, seed: u64) -> Result<KsReport> {
    check_n(n)?;
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("level must be finite and > 0, got {x}"));
    }
    let rx: Vec<f64> = stable_draws(alpha, seed, streams::SCALING_X, n)?
        .into_iter()
        .map(|z| hitting_time_from(alpha, x, z))
        .collect();
    let scale = x.powf(alpha);
    let r1: Vec<f64> = stable_draws(alpha, seed, streams::SCALING_ONE, n)?
        .into_iter()
        .map(|z| scale * hitting_time_from(alpha, 1.0, z))
        .collect();
    Ok(KsReport {
        statistic: ks_statistic(&rx, &r1),
        critical: ks_critical_999(rx.len(), r1.len()),
    })
}
