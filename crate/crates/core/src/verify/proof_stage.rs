//! The intermediate inequalities behind the converse binomial inequality for
//! α > 2 with ⌊α⌋ even: cosine sums, the large-λ root-sum bound, its
//! polynomial relaxation on a lattice, and the small-λ estimates.

use std::f64::consts::PI;

use serde::Serialize;

use super::record::{CheckId, InequalityRecord, Params};
use crate::binomial::{check_even_floor, int1_closed, int_quad, root_sum, truncated_integral, SemiInfinite};
use crate::error::{domain, Result};
use crate::quadrature::QuadratureSpec;
use crate::summation::compensated_sum;

/// Relative tolerance of the cosine-sum equality.
pub const COSINE_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProofStageKind {
    CosineSum,
    BigLambda,
    Goal3a,
    CadGrid,
    WithSine,
    FinalGoal,
    Goal3Monotone,
}

impl ProofStageKind {
    pub const ALL: [ProofStageKind; 7] = [
        ProofStageKind::CosineSum,
        ProofStageKind::BigLambda,
        ProofStageKind::Goal3a,
        ProofStageKind::CadGrid,
        ProofStageKind::WithSine,
        ProofStageKind::FinalGoal,
        ProofStageKind::Goal3Monotone,
    ];

    pub fn check_id(&self) -> CheckId {
        match self {
            ProofStageKind::CosineSum => CheckId::CosineSum,
            ProofStageKind::BigLambda => CheckId::BigLambda,
            ProofStageKind::Goal3a => CheckId::Goal3a,
            ProofStageKind::CadGrid => CheckId::CadGrid,
            ProofStageKind::WithSine => CheckId::WithSine,
            ProofStageKind::FinalGoal => CheckId::FinalGoal,
            ProofStageKind::Goal3Monotone => CheckId::Goal3Monotone,
        }
    }
}

/// Lattice for the polynomial relaxation: integer M, A on a `pitch` lattice
/// strictly inside (2M, 2M+1), λ on a `pitch` lattice in [lambda_lo, lambda_hi].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CadLattice {
    pub m_values: Vec<u32>,
    pub pitch: f64,
    pub lambda_lo: f64,
    pub lambda_hi: f64,
}

impl Default for CadLattice {
    fn default() -> Self {
        CadLattice {
            m_values: (1..=5).collect(),
            pitch: 0.01,
            lambda_lo: 0.5,
            lambda_hi: 1.0,
        }
    }
}

/// Inputs shared by the section checks; each kind reads the fields it needs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProofStageParams {
    pub alphas: Vec<f64>,
    pub ks: Vec<u32>,
    pub lambdas: Vec<f64>,
    pub cad: CadLattice,
}

fn half_floor(alpha: f64) -> i64 {
    alpha.floor() as i64 / 2
}

/// Σ_{j=−m}^{m} (1 + 2λ cos(2jπ/α) + λ²), summed term by term.
pub fn cosine_sum_direct(alpha: f64, lambda: f64) -> f64 {
    let m = half_floor(alpha);
    compensated_sum((-m..=m).map(|j| 1.0 + 2.0 * lambda * (2.0 * j as f64 * PI / alpha).cos() + lambda * lambda))
}

/// The geometric-series form ⌈α⌉(1+λ²) + 2λ(1 + 2 cos((m+1)π/α) sin(mπ/α)/sin(π/α)).
pub fn cosine_sum_closed(alpha: f64, lambda: f64) -> f64 {
    let m = half_floor(alpha) as f64;
    let q = ((m + 1.0) * PI / alpha).cos() * (m * PI / alpha).sin() / (PI / alpha).sin();
    alpha.ceil() * (1.0 + lambda * lambda) + 2.0 * lambda * (1.0 + 2.0 * q)
}

/// sin((⌊α⌋+1)π/α) / sin((α+1)π/α)
pub fn sine_quotient(alpha: f64) -> f64 {
    ((alpha.floor() + 1.0) * PI / alpha).sin() / ((alpha + 1.0) * PI / alpha).sin()
}

/// 2⌊α/3⌋ + 1 − α + sin((⌊α⌋+1)π/α)/sin((α+1)π/α)
pub fn final_goal_expr(alpha: f64) -> f64 {
    2.0 * (alpha / 3.0).floor() + 1.0 - alpha + sine_quotient(alpha)
}

/// Both sides of the lattice relaxation at (A, M, λ).
pub fn cad_sides(a: f64, m: f64, lambda: f64) -> (f64, f64) {
    let pa = PI / a;
    let cos_bound = -1.0 + 0.5 * ((m + 1.0) * PI / a - PI).powi(2);
    let quotient = cos_bound * (m * PI / a) / (pa - pa.powi(3) / 6.0);
    let lhs = (a + 1.0) * (1.0 + lambda * lambda) + 2.0 * lambda * (1.0 + 2.0 * quotient);
    let rhs = a * (1.0 + lambda).powi(2);
    (lhs, rhs)
}

/// Left side of the small-λ target inequality:
/// 2 Σ_{j=1}^m (1+2λ cos(2jπ/α)+λ²)^(αk/2) + (1−α)(1+λ)^(αk) − (α sin απ/π) ∫₀^{1/λ} …
/// Returns (value, error estimate).
pub fn goal3_lhs(alpha: f64, k: u32, lambda: f64, spec: &QuadratureSpec) -> Result<(f64, f64)> {
    let m = half_floor(alpha);
    let ak = alpha * k as f64;
    let mut terms: Vec<f64> = (1..=m)
        .map(|j| 2.0 * (1.0 + 2.0 * lambda * (2.0 * j as f64 * PI / alpha).cos() + lambda * lambda).powf(ak / 2.0))
        .collect();
    terms.push((1.0 - alpha) * (1.0 + lambda).powf(ak));
    let coeff = alpha * (alpha * PI).sin() / PI;
    let t = truncated_integral(alpha, k, lambda, spec)?;
    terms.push(-coeff * t.value);
    Ok((compensated_sum(terms), coeff.abs() * t.abs_error_estimate))
}

fn need_lambdas(p: &ProofStageParams, lo: f64, hi: f64, what: &str) -> Result<()> {
    if p.lambdas.is_empty() {
        return domain(format!("{what} needs a lambda grid"));
    }
    if p.lambdas.iter().any(|&l| !(l >= lo && l <= hi)) {
        return domain(format!("{what} needs lambda in [{lo}, {hi}]"));
    }
    Ok(())
}

fn need_alphas(p: &ProofStageParams) -> Result<()> {
    if p.alphas.is_empty() {
        return domain("alpha list is empty");
    }
    for &a in &p.alphas {
        check_even_floor(a)?;
    }
    Ok(())
}

/// Evaluates one family of section checks over the supplied parameters.
pub fn check_proof_stage(
    kind: ProofStageKind,
    p: &ProofStageParams,
    spec: &QuadratureSpec,
    atol: f64,
) -> Result<Vec<InequalityRecord>> {
    let id = kind.check_id();
    let mut out = Vec::new();
    match kind {
        ProofStageKind::CosineSum => {
            need_lambdas(p, f64::MIN_POSITIVE, 1.0, "cosine_sum")?;
            if p.alphas.is_empty() {
                return domain("alpha list is empty");
            }
            for &alpha in &p.alphas {
                if !(alpha > 2.0) || alpha.fract() == 0.0 || half_floor(alpha) * 2 != alpha.floor() as i64 {
                    return domain(format!(
                        "cosine_sum needs floor(alpha) = 2m, non-integer alpha > 2, got {alpha}"
                    ));
                }
                for &lambda in &p.lambdas {
                    let lhs = cosine_sum_direct(alpha, lambda);
                    let rhs = cosine_sum_closed(alpha, lambda);
                    let tol = COSINE_SUM_TOL * lhs.abs().max(1.0);
                    let raw = 1.0 - (lhs - rhs).abs() / tol;
                    let params = Params::alpha(alpha).with_lambda(lambda);
                    out.push(InequalityRecord::new(id, params, lhs, rhs, raw, 0.0, atol));
                }
            }
        }
        ProofStageKind::BigLambda => {
            need_alphas(p)?;
            need_lambdas(p, 0.5, 1.0, "big_lambda")?;
            for &alpha in &p.alphas {
                for &k in &p.ks {
                    for &lambda in &p.lambdas {
                        let norm = (alpha * k as f64 * lambda.ln_1p()).exp();
                        let lhs = root_sum(alpha, lambda, k)? / norm;
                        let rhs = alpha;
                        let err = 8.0 * f64::EPSILON * alpha.ceil() * (1.0 + k as f64) * alpha;
                        let params = Params::alpha(alpha).with_k(k).with_lambda(lambda);
                        out.push(InequalityRecord::new(id, params, lhs, rhs, rhs - lhs, err, atol));
                    }
                }
            }
        }
        ProofStageKind::Goal3a => {
            need_alphas(p)?;
            need_lambdas(p, 0.5, 1.0, "goal3a")?;
            for &alpha in &p.alphas {
                for &lambda in &p.lambdas {
                    let lhs = cosine_sum_direct(alpha, lambda);
                    let rhs = alpha * (1.0 + lambda).powi(2);
                    let err = 8.0 * f64::EPSILON * (lhs.abs() + rhs.abs());
                    let params = Params::alpha(alpha).with_lambda(lambda);
                    out.push(InequalityRecord::new(id, params, lhs, rhs, rhs - lhs, err, atol));
                }
            }
        }
        ProofStageKind::CadGrid => {
            let c = &p.cad;
            if !(c.pitch > 0.0) || !(c.lambda_lo <= c.lambda_hi) || c.m_values.is_empty() {
                return domain("invalid lattice");
            }
            let steps_a = (1.0 / c.pitch).round() as i64;
            let steps_l = ((c.lambda_hi - c.lambda_lo) / c.pitch).round() as i64;
            for &m in &c.m_values {
                if m == 0 {
                    return domain("M must be >= 1");
                }
                for i in 1..steps_a {
                    let a = 2.0 * m as f64 + i as f64 * c.pitch;
                    for j in 0..=steps_l {
                        let lambda = c.lambda_lo + j as f64 * c.pitch;
                        let (lhs, rhs) = cad_sides(a, m as f64, lambda);
                        let err = 16.0 * f64::EPSILON * (lhs.abs() + rhs.abs());
                        let params = Params::alpha(a).with_k(m).with_lambda(lambda);
                        out.push(InequalityRecord::new(id, params, lhs, rhs, rhs - lhs, err, atol));
                    }
                }
            }
        }
        ProofStageKind::WithSine => {
            need_alphas(p)?;
            for &alpha in &p.alphas {
                let q = sine_quotient(alpha);
                // the same quotient through quadrature of the first semi-infinite integral
                let quad = int_quad(alpha, SemiInfinite::First, spec)?;
                let coeff = alpha * (alpha * PI).sin() / PI;
                let q_quad = coeff * quad.value;
                debug_assert!((coeff * int1_closed(alpha)? - q).abs() <= 1e-12 * q.abs().max(1.0));
                let err = (q - q_quad).abs() + coeff.abs() * quad.abs_error_estimate;
                out.push(InequalityRecord::new(
                    id,
                    Params::alpha(alpha),
                    q,
                    1.0,
                    1.0 - q,
                    err,
                    atol,
                ));
            }
        }
        ProofStageKind::FinalGoal => {
            need_alphas(p)?;
            for &alpha in &p.alphas {
                let e = final_goal_expr(alpha);
                let err = 8.0 * f64::EPSILON * alpha;
                out.push(InequalityRecord::new(id, Params::alpha(alpha), e, 0.0, -e, err, atol));
            }
        }
        ProofStageKind::Goal3Monotone => {
            need_alphas(p)?;
            need_lambdas(p, f64::MIN_POSITIVE, 0.5, "goal3_monotone")?;
            if p.lambdas.iter().any(|&l| l >= 0.5) {
                return domain("goal3_monotone needs lambda in (0, 1/2)");
            }
            if p.lambdas.windows(2).any(|w| w[1] <= w[0]) {
                return domain("goal3_monotone needs an increasing lambda grid");
            }
            for &alpha in &p.alphas {
                for &k in &p.ks {
                    let values = p
                        .lambdas
                        .iter()
                        .map(|&l| goal3_lhs(alpha, k, l, spec))
                        .collect::<Result<Vec<_>>>()?;
                    for i in 1..values.len() {
                        let (g0, e0) = values[i - 1];
                        let (g1, e1) = values[i];
                        let err = e0 + e1 + 8.0 * f64::EPSILON * (g0.abs() + g1.abs());
                        let params = Params::alpha(alpha)
                            .with_k(k)
                            .with_lambda(p.lambdas[i])
                            .with_x(p.lambdas[i - 1]);
                        out.push(InequalityRecord::new(id, params, g1, g0, g0 - g1, err, atol));
                    }
                }
            }
        }
    }
    Ok(out)
}
