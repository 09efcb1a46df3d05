//! The one-parameter Mittag-Leffler function
//!
//! E_α(x) = Σ_{k≥0} x^k / Γ(αk + 1)
//!
//! evaluated by direct compensated summation of the power series, together
//! with the Stieltjes-type integral representations of E_α(x^α) for
//! 0 < α < 2:
//!
//! E_α(x^α) = e^x/α − (sin απ / π) ∫₀^∞ t^(α−1) e^(−xt) / (t^(2α) − 2 cos(απ) t^α + 1) dt.
//!
//! For 0 < α < 1 the integral term is φ_α(x) ≥ 0; for 1 < α < 2 it is
//! negative and ψ_α(x) = α e^(−x) E_α(x^α) collects it.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::gamma::log_gamma_unchecked;
use crate::quadrature::{integrate, integrate_substituted, QuadratureSpec, Substitution};
use crate::summation::NeumaierSum;
use crate::EvalResult;

/// Series controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlConfig {
    /// Largest |x| accepted by [`ml`] and [`ml_deriv`], and largest x
    /// accepted by [`ml_power`].
    pub x_max: f64,
    pub max_terms: usize,
    /// A term counts as negligible once |term| ≤ eps·|partial sum|.
    pub eps: f64,
}

impl Default for MlConfig {
    fn default() -> Self {
        Self {
            x_max: 50.0,
            max_terms: 20_000,
            eps: 1e-17,
        }
    }
}

// ln f64::MAX
const LN_MAX: f64 = 709.78;
const NEGLIGIBLE_RUN: usize = 3;

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return domain(format!("alpha must be finite and > 0, got {alpha}"));
    }
    Ok(())
}

/// Sums Σ_{k≥k0} c_k x^(k−k0) / Γ(αk + 1) with c_k = 1 (value) or c_k = k
/// (derivative, k0 = 1).
fn series(alpha: f64, x: f64, derivative: bool, cfg: &MlConfig) -> Result<EvalResult> {
    let first = usize::from(derivative);
    if x == 0.0 {
        let v = if derivative {
            (-log_gamma_unchecked(alpha + 1.0)).exp()
        } else {
            1.0
        };
        return Ok(EvalResult::exact(v));
    }
    let ln_abs_x = x.abs().ln();
    let negative = x < 0.0;

    let mut sum = NeumaierSum::new();
    let mut abs_sum = 0.0;
    let mut rounding = 0.0;
    let mut prev_log: Option<f64> = None;
    let mut past_peak = false;
    let mut negligible_run = 0;
    let mut last_ratio = 0.0;

    for k in first..first + cfg.max_terms {
        let kf = k as f64;
        let power = (k - first) as f64;
        let lg = log_gamma_unchecked(alpha * kf + 1.0);
        let mut log_mag = power * ln_abs_x - lg;
        if derivative {
            log_mag += kf.ln();
        }
        if log_mag > LN_MAX {
            return Err(Error::Overflow(format!(
                "Mittag-Leffler series term exceeds double range at alpha={alpha}, x={x}"
            )));
        }
        let mag = log_mag.exp();
        let term = if negative && (k - first) % 2 == 1 { -mag } else { mag };
        sum.add(term);
        abs_sum += mag;
        // exp amplifies the absolute error of its argument
        rounding += mag * f64::EPSILON * (2.0 + (power * ln_abs_x).abs() + lg.abs());

        if let Some(p) = prev_log {
            if log_mag < p {
                past_peak = true;
                last_ratio = (log_mag - p).exp();
            }
        }
        prev_log = Some(log_mag);

        let partial = sum.value();
        if mag <= cfg.eps * partial.abs() {
            negligible_run += 1;
        } else {
            negligible_run = 0;
        }
        if past_peak && negligible_run >= NEGLIGIBLE_RUN {
            let value = sum.value();
            if !value.is_finite() {
                return Err(Error::Overflow(format!("E_{alpha}({x}) is not finite")));
            }
            let tail = if last_ratio < 1.0 {
                mag * last_ratio / (1.0 - last_ratio)
            } else {
                mag
            };
            let err = tail + rounding + 2.0 * f64::EPSILON * abs_sum.max(value.abs());
            return Ok(EvalResult::new(value, err, k + 1 - first));
        }
    }
    Err(Error::NonConvergence { terms: cfg.max_terms })
}

/// E_α(x) with default series controls.
pub fn ml(alpha: f64, x: f64) -> Result<EvalResult> {
    ml_with(alpha, x, &MlConfig::default())
}

pub fn ml_with(alpha: f64, x: f64, cfg: &MlConfig) -> Result<EvalResult> {
    check_alpha(alpha)?;
    if !x.is_finite() || x.abs() > cfg.x_max {
        return domain(format!("|x| must be at most {}, got {x}", cfg.x_max));
    }
    series(alpha, x, false, cfg)
}

/// E_α(x^α) for x ≥ 0; exactly 1 at x = 0.
pub fn ml_power(alpha: f64, x: f64) -> Result<EvalResult> {
    ml_power_with(alpha, x, &MlConfig::default())
}

pub fn ml_power_with(alpha: f64, x: f64, cfg: &MlConfig) -> Result<EvalResult> {
    check_alpha(alpha)?;
    if !(x >= 0.0) || x > cfg.x_max {
        return domain(format!("ml_power needs 0 <= x <= {}, got {x}", cfg.x_max));
    }
    if x == 0.0 {
        return Ok(EvalResult::exact(1.0));
    }
    series(alpha, x.powf(alpha), false, cfg)
}

/// E'_α(x) by termwise differentiation.
pub fn ml_deriv(alpha: f64, x: f64) -> Result<EvalResult> {
    ml_deriv_with(alpha, x, &MlConfig::default())
}

pub fn ml_deriv_with(alpha: f64, x: f64, cfg: &MlConfig) -> Result<EvalResult> {
    check_alpha(alpha)?;
    if !x.is_finite() || x.abs() > cfg.x_max {
        return domain(format!("|x| must be at most {}, got {x}", cfg.x_max));
    }
    series(alpha, x, true, cfg)
}

/// The two summands of E_α(x^α) = exp_term − integral_term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReprComponents {
    pub alpha: f64,
    pub x: f64,
    /// e^x / α
    pub exp_term: f64,
    /// (sin απ / π) ∫₀^∞ t^(α−1) e^(−xt) / D(t^α) dt; equals φ_α(x) for α < 1.
    pub integral_term: f64,
    pub integral_error: f64,
}

impl ReprComponents {
    pub fn value(&self) -> f64 {
        self.exp_term - self.integral_term
    }
}

/// sin απ with exact zeros at integer α.
pub(crate) fn sin_pi(alpha: f64) -> f64 {
    if alpha.fract() == 0.0 {
        0.0
    } else {
        (alpha * PI).sin()
    }
}

/// ∫₀^∞ t^(α−1) e^(−xt) / (t^(2α) − 2 cos(απ) t^α + 1) dt, split at t = 1.
fn stieltjes_integral(alpha: f64, x: f64, spec: &QuadratureSpec) -> Result<EvalResult> {
    let c = (alpha * PI).cos();
    let s = sin_pi(alpha);
    if s * s < 1e-24 {
        return domain(format!(
            "representation denominator degenerates at alpha={alpha} (sin(alpha*pi) = 0)"
        ));
    }
    let s2 = s * s;
    // (w − c)² + s² ≥ sin²(απ) for every w
    let denom = move |w: f64| {
        let d = (w - c) * (w - c) + s2;
        debug_assert!(d >= s2 * (1.0 - 1e-12));
        d
    };
    let integrand = |t: f64| {
        if t == 0.0 {
            return 0.0;
        }
        t.powf(alpha - 1.0) * (-x * t).exp() / denom(t.powf(alpha))
    };
    let head_sub = match spec.substitution {
        Substitution::PowerAlpha => Substitution::PowerAlpha,
        Substitution::None | Substitution::Inverse => Substitution::None,
    };
    let head = integrate_substituted(integrand, 0.0, 1.0, head_sub, alpha, spec)?;
    // w = t^(−α) maps [1, ∞) onto (0, 1] with a bounded, smooth integrand
    let inv = 1.0 / alpha;
    let tail_integrand = |w: f64| {
        if w == 0.0 {
            return 0.0;
        }
        let d = (1.0 - c * w) * (1.0 - c * w) + s2 * w * w;
        inv * (-x * w.powf(-inv)).exp() / d
    };
    let tail = integrate(tail_integrand, 0.0, 1.0, spec)?;
    Ok(EvalResult::new(
        head.value + tail.value,
        head.abs_error_estimate + tail.abs_error_estimate,
        head.work + tail.work,
    ))
}

fn check_x_positive(x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("x must be finite and > 0, got {x}"));
    }
    Ok(())
}

/// Both summands of the integral representation of E_α(x^α), for α ∈ (0, 2)
/// away from α = 1.
pub fn representation(alpha: f64, x: f64, spec: &QuadratureSpec) -> Result<ReprComponents> {
    if !(alpha > 0.0 && alpha < 2.0) || alpha == 1.0 {
        return domain(format!("representation needs alpha in (0,1) or (1,2), got {alpha}"));
    }
    check_x_positive(x)?;
    let integral = stieltjes_integral(alpha, x, spec)?;
    let scale = sin_pi(alpha) / PI;
    Ok(ReprComponents {
        alpha,
        x,
        exp_term: x.exp() / alpha,
        integral_term: scale * integral.value,
        integral_error: scale.abs() * integral.abs_error_estimate,
    })
}

/// φ_α(x) = (sin απ / π) ∫₀^∞ t^(α−1) e^(−xt) / (t^(2α) − 2 cos(απ) t^α + 1) dt, 0 < α < 1.
pub fn phi(alpha: f64, x: f64, spec: &QuadratureSpec) -> Result<EvalResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("phi needs 0 < alpha < 1, got {alpha}"));
    }
    check_x_positive(x)?;
    let integral = stieltjes_integral(alpha, x, spec)?;
    let scale = sin_pi(alpha) / PI;
    Ok(EvalResult::new(
        scale * integral.value,
        scale * integral.abs_error_estimate,
        integral.work,
    ))
}

/// ψ_α(x) = 1 − (α sin απ / π) ∫₀^∞ t^(α−1) e^(−x(1+t)) / (t^(2α) − 2 cos(απ) t^α + 1) dt,
/// 1 < α < 2.
pub fn psi(alpha: f64, x: f64, spec: &QuadratureSpec) -> Result<EvalResult> {
    if !(alpha > 1.0 && alpha < 2.0) {
        return domain(format!("psi needs 1 < alpha < 2, got {alpha}"));
    }
    check_x_positive(x)?;
    let integral = stieltjes_integral(alpha, x, spec)?;
    let scale = alpha * sin_pi(alpha) / PI * (-x).exp();
    Ok(EvalResult::new(
        1.0 - scale * integral.value,
        scale.abs() * integral.abs_error_estimate,
        integral.work,
    ))
}
