//! Finite-difference probes of log-concavity/convexity, monotone logarithmic
//! derivatives and complete monotonicity.

use serde::Serialize;

use super::record::{CheckId, InequalityRecord, Params};
use crate::error::{domain, Result};
use crate::mittag_leffler::{ml, ml_deriv, ml_power, phi, psi};
use crate::quadrature::QuadratureSpec;
use crate::EvalResult;

/// Step for the second-difference shape check.
pub const SHAPE_STEP: f64 = 1e-3;
/// Step for the complete-monotonicity probe.
pub const CM_STEP: f64 = 0.08;
pub const CM_MAX_ORDER: u32 = 8;
/// Relative rounding level per function value in the difference budgets.
const ROUNDING: f64 = 1e-12;

fn check_grid(xs: &[f64]) -> Result<()> {
    if xs.is_empty() {
        return domain("grid is empty");
    }
    if xs.iter().any(|x| !x.is_finite()) {
        return domain("grid values must be finite");
    }
    Ok(())
}

/// (log E_4(x^4))'' in closed form.
pub fn log_e4_second_derivative(x: f64) -> f64 {
    2.0 * x.sin() * x.sinh() / (x.cos() + x.cosh()).powi(2)
}

/// Second central difference of log E_α(x^α) at each grid point. The margin
/// is oriented toward concavity for α < 1 and convexity for α > 1; α = 4
/// uses the closed-form second derivative instead of differences.
pub fn check_log_shape(alpha: f64, x_grid: &[f64], h: f64, atol: f64) -> Result<Vec<InequalityRecord>> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return domain(format!("alpha must be > 0, got {alpha}"));
    }
    if !(h > 0.0) {
        return domain(format!("step must be > 0, got {h}"));
    }
    check_grid(x_grid)?;
    if let Some(&x) = x_grid.iter().find(|&&x| x - h <= 0.0) {
        return domain(format!("grid point {x} is too close to 0 for step {h}"));
    }
    let mut out = Vec::with_capacity(x_grid.len());
    for &x in x_grid {
        let params = Params::alpha(alpha).with_x(x).with_h(h);
        if alpha == 4.0 {
            let d2 = log_e4_second_derivative(x);
            let err = 4.0 * f64::EPSILON * d2.abs();
            out.push(InequalityRecord::new(CheckId::LogShape, params, d2, 0.0, d2, err, atol));
            continue;
        }
        let lo = ml_power(alpha, x - h)?;
        let mid = ml_power(alpha, x)?;
        let hi = ml_power(alpha, x + h)?;
        let logs = [lo.value.ln(), mid.value.ln(), hi.value.ln()];
        let d2 = (logs[2] - 2.0 * logs[1] + logs[0]) / (h * h);
        let max_log = logs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let propagated = lo.rel_error_estimate() + 2.0 * mid.rel_error_estimate() + hi.rel_error_estimate();
        let err = (ROUNDING * max_log + propagated) / (h * h);
        let raw = if alpha < 1.0 { -d2 } else { d2 };
        let rec = InequalityRecord::new(CheckId::LogShape, params, d2, 0.0, raw, err, atol);
        out.push(if alpha > 2.0 { rec.informational() } else { rec });
    }
    Ok(out)
}

/// E'_α(x)/E_α(x) compared pairwise along an increasing grid:
/// nondecreasing for α ≤ 1 (on all of R), nonincreasing for α > 1 (x > 0).
pub fn check_logderiv_monotone(alpha: f64, x_grid: &[f64], atol: f64) -> Result<Vec<InequalityRecord>> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return domain(format!("alpha must be > 0, got {alpha}"));
    }
    check_grid(x_grid)?;
    if x_grid.windows(2).any(|w| w[1] <= w[0]) {
        return domain("grid must be strictly increasing");
    }
    if alpha > 1.0 && x_grid[0] <= 0.0 {
        return domain("for alpha > 1 the grid must be positive");
    }
    let ratios = x_grid
        .iter()
        .map(|&x| {
            let d = ml_deriv(alpha, x)?;
            let v = ml(alpha, x)?;
            let r = d.value / v.value;
            let err = r.abs() * (d.rel_error_estimate() + v.rel_error_estimate() + 2.0 * f64::EPSILON);
            Ok((r, err))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::with_capacity(x_grid.len().saturating_sub(1));
    for i in 1..x_grid.len() {
        let (r0, e0) = ratios[i - 1];
        let (r1, e1) = ratios[i];
        let raw = if alpha > 1.0 { r0 - r1 } else { r1 - r0 };
        let params = Params::alpha(alpha).with_x(x_grid[i - 1]).with_y(x_grid[i]);
        out.push(InequalityRecord::new(
            CheckId::LogDeriv,
            params,
            r1,
            r0,
            raw,
            e0 + e1,
            atol,
        ));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CmTarget {
    /// 1/E_α(x)
    RecipMl,
    /// φ_α(x), α ∈ (0,1)
    Phi,
    /// ψ_α(x), α ∈ (1,2)
    Psi,
}

impl CmTarget {
    pub fn check_id(&self) -> CheckId {
        match self {
            CmTarget::RecipMl => CheckId::CmRecipMl,
            CmTarget::Phi => CheckId::CmPhi,
            CmTarget::Psi => CheckId::CmPsi,
        }
    }

    fn eval(&self, alpha: f64, x: f64, spec: &QuadratureSpec) -> Result<EvalResult> {
        match self {
            CmTarget::RecipMl => {
                let e = ml(alpha, x)?;
                Ok(EvalResult::new(1.0 / e.value, e.rel_error_estimate() / e.value, e.work))
            }
            CmTarget::Phi => phi(alpha, x, spec),
            CmTarget::Psi => psi(alpha, x, spec),
        }
    }
}

/// Quadrature settings tight enough for 8th differences at step ~0.1.
pub fn cm_quadrature() -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: 1e-16,
        rel_tol: 1e-14,
        ..QuadratureSpec::default()
    }
}

/// Signs of backward differences (−1)^n ∇ⁿf(x)/hⁿ, n = 1..=n_max, with
/// ∇ⁿf(x) = Σᵢ (−1)^i C(n,i) f(x − ih). The difference order is reported in
/// `k`. Records for 1/E_α with α < 2 are informational: complete monotonicity
/// is only known for α ≥ 2 there.
pub fn check_cm_probe(
    target: CmTarget,
    alpha: f64,
    n_max: u32,
    x_grid: &[f64],
    h: f64,
    spec: &QuadratureSpec,
    atol: f64,
) -> Result<Vec<InequalityRecord>> {
    if n_max == 0 || n_max > CM_MAX_ORDER {
        return domain(format!("difference order must lie in 1..={CM_MAX_ORDER}, got {n_max}"));
    }
    if !(h > 0.0) {
        return domain(format!("step must be > 0, got {h}"));
    }
    check_grid(x_grid)?;
    if let Some(&x) = x_grid.iter().find(|&&x| x - n_max as f64 * h <= 0.0) {
        return domain(format!("grid point {x} leaves the stencil x - n*h <= 0"));
    }
    match target {
        CmTarget::RecipMl if !(alpha > 0.0) => return domain(format!("alpha must be > 0, got {alpha}")),
        CmTarget::Phi if !(alpha > 0.0 && alpha < 1.0) => {
            return domain(format!("phi needs alpha in (0,1), got {alpha}"))
        }
        CmTarget::Psi if !(alpha > 1.0 && alpha < 2.0) => {
            return domain(format!("psi needs alpha in (1,2), got {alpha}"))
        }
        _ => {}
    }
    let informational = target == CmTarget::RecipMl && alpha < 2.0;
    let mut out = Vec::with_capacity(x_grid.len() * n_max as usize);
    for &x in x_grid {
        let stencil = (0..=n_max)
            .map(|i| target.eval(alpha, x - i as f64 * h, spec))
            .collect::<Result<Vec<_>>>()?;
        let max_f = stencil.iter().fold(0.0f64, |m, r| m.max(r.value.abs()));
        for n in 1..=n_max {
            let mut diff = 0.0;
            let mut prop = 0.0;
            let mut binom = 1.0;
            for (i, r) in stencil.iter().take(n as usize + 1).enumerate() {
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                diff += sign * binom * r.value;
                prop += binom * r.abs_error_estimate;
                binom = binom * (n as f64 - i as f64) / (i as f64 + 1.0);
            }
            let scale = h.powi(-(n as i32));
            let deriv = diff * scale;
            let raw = if n % 2 == 0 { deriv } else { -deriv };
            let err = (ROUNDING * max_f + prop) * scale;
            let params = Params::alpha(alpha).with_k(n).with_x(x).with_h(h);
            let rec = InequalityRecord::new(target.check_id(), params, raw, 0.0, raw, err, atol);
            out.push(if informational { rec.informational() } else { rec });
        }
    }
    Ok(out)
}
