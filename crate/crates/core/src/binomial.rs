//! The extended binomial theorem for real exponents:
//!
//! α Σ_{j=0}^k binom(αk, αj) λ^(αj) = Σ_{ω∈K_α} (1+λω)^(αk) − (α λ^α sin απ / π) ∫₀¹ F(t,λ,k) dt
//!
//! where K_α = { e^(2πin/α) : n ∈ Z, −α/2 < n ≤ α/2 } and
//!
//! F(t,λ,k) = t^(α−1) (1−t)^(αk) ( 1/|t^α − λ^α e^(−iαπ)|² + λ^(αk)/|e^(−iαπ) − (λt)^α|² ).
//!
//! Also hosts the two semi-infinite integrals with closed forms used for the
//! even-floor case and the small-λ expansion of their truncated version.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::gamma::ln_gen_binom;
use crate::mittag_leffler::sin_pi;
use crate::quadrature::{integrate, integrate_substituted, QuadratureSpec, Substitution};
use crate::summation::{compensated_sum, NeumaierSum};
use crate::EvalResult;

/// Imaginary residue allowed in a root sum, relative to Σ|terms|.
pub const IMAG_RESIDUE_TOL: f64 = 1e-12;

/// The finite set K_α of unit-circle roots ω with ω^α = 1 under the
/// principal power, stored as integer indices n with angle 2πn/α.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootSet {
    pub alpha: f64,
    pub indices: Vec<i64>,
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn angle(&self, index: i64) -> f64 {
        2.0 * PI * index as f64 / self.alpha
    }

    pub fn angles(&self) -> Vec<f64> {
        self.indices.iter().map(|&n| self.angle(n)).collect()
    }

    /// ω for an index, with the real roots ±1 produced exactly.
    pub fn omega(&self, index: i64) -> Complex64 {
        if index == 0 {
            Complex64::new(1.0, 0.0)
        } else if 2.0 * index as f64 == self.alpha {
            Complex64::new(-1.0, 0.0)
        } else {
            Complex64::from_polar(1.0, self.angle(index))
        }
    }

    pub fn omegas(&self) -> Vec<Complex64> {
        self.indices.iter().map(|&n| self.omega(n)).collect()
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return domain(format!("alpha must be finite and > 0, got {alpha}"));
    }
    Ok(())
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return domain(format!("lambda must lie in (0, 1], got {lambda}"));
    }
    Ok(())
}

/// Enumerates K_α.
pub fn roots(alpha: f64) -> Result<RootSet> {
    check_alpha(alpha)?;
    let lo = (-alpha / 2.0).floor() as i64 + 1;
    let hi = (alpha / 2.0).floor() as i64;
    Ok(RootSet {
        alpha,
        indices: (lo..=hi).collect(),
    })
}

/// A root sum before projection onto the real axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootSum {
    pub real: f64,
    pub imag: f64,
    /// Σ |(1+λω)^(αk)|
    pub abs_sum: f64,
}

/// Σ_{ω∈K_α} (1+λω)^(αk) with the principal branch, keeping the imaginary part.
pub fn root_sum_complex(alpha: f64, lambda: f64, k: u32) -> Result<RootSum> {
    let set = roots(alpha)?;
    check_lambda(lambda)?;
    let exponent = alpha * k as f64;
    let integer_exponent = alpha.fract() == 0.0 && exponent <= i32::MAX as f64;
    let mut re = NeumaierSum::new();
    let mut im = NeumaierSum::new();
    let mut abs_sum = 0.0;
    for &n in &set.indices {
        let z = Complex64::new(1.0, 0.0) + set.omega(n) * lambda;
        let term = if k == 0 {
            Complex64::new(1.0, 0.0)
        } else if integer_exponent {
            z.powi(exponent as i32)
        } else {
            if z.norm() == 0.0 {
                return Err(Error::Branch);
            }
            let (r, theta) = z.to_polar();
            Complex64::from_polar((exponent * r.ln()).exp(), exponent * theta)
        };
        re.add(term.re);
        im.add(term.im);
        abs_sum += term.norm();
    }
    Ok(RootSum {
        real: re.value(),
        imag: im.value(),
        abs_sum,
    })
}

/// Real root sum Σ_{ω∈K_α} (1+λω)^(αk); errors if the imaginary residue left
/// by conjugate pairing exceeds [`IMAG_RESIDUE_TOL`].
pub fn root_sum(alpha: f64, lambda: f64, k: u32) -> Result<f64> {
    let rs = root_sum_complex(alpha, lambda, k)?;
    if rs.imag.abs() > IMAG_RESIDUE_TOL * rs.abs_sum {
        return Err(Error::ImaginaryResidue {
            residue: rs.imag.abs(),
            scale: rs.abs_sum,
        });
    }
    Ok(rs.real)
}

/// Binomial sum Σ_{j=0}^k binom(αk, αj) λ^(αj), λ ∈ (0, 1].
pub fn binom_sum(alpha: f64, k: u32, lambda: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_lambda(lambda)?;
    let a = alpha * k as f64;
    let ln_lambda = lambda.ln();
    let mut terms = Vec::with_capacity(k as usize + 1);
    for j in 0..=k {
        let b = alpha * j as f64;
        let ln_term = ln_gen_binom(a, b)? + b * ln_lambda;
        terms.push(ln_term.exp());
    }
    Ok(compensated_sum(terms))
}

fn f_value(alpha: f64, t: f64, lambda: f64, k: u32, cos_a: f64, sin_a: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        return 0.0;
    }
    let ta = t.powf(alpha);
    let la = lambda.powf(alpha);
    let lt = la * ta;
    // |t^α − λ^α e^(−iαπ)|² and |e^(−iαπ) − (λt)^α|²
    let d1 = (ta - la * cos_a).powi(2) + (la * sin_a).powi(2);
    let d2 = (1.0 - lt * cos_a).powi(2) + (lt * sin_a).powi(2);
    let ak = alpha * k as f64;
    let decay = if k == 0 { 1.0 } else { (ak * (-t).ln_1p()).exp() };
    let lambda_ak = if k == 0 { 1.0 } else { (ak * lambda.ln()).exp() };
    t.powf(alpha - 1.0) * decay * (1.0 / d1 + lambda_ak / d2)
}

/// F(t, λ, k) for t ∈ (0, 1), λ ∈ (0, 1].
pub fn f_integrand(alpha: f64, t: f64, lambda: f64, k: u32) -> Result<f64> {
    check_alpha(alpha)?;
    check_lambda(lambda)?;
    if !(t > 0.0 && t < 1.0) {
        return domain(format!("t must lie in (0, 1), got {t}"));
    }
    Ok(f_value(alpha, t, lambda, k, (alpha * PI).cos(), sin_pi(alpha)))
}

/// ∫₀¹ F(t, λ, k) dt.
///
/// The range is split at t = ½; for α < 1 the left piece is integrated in
/// u = t^α unless `spec.substitution` is `None`. The right piece runs in t
/// and the adaptive bisection works toward the (1−t)^(αk) endpoint.
pub fn f_integral(alpha: f64, lambda: f64, k: u32, spec: &QuadratureSpec) -> Result<EvalResult> {
    check_alpha(alpha)?;
    check_lambda(lambda)?;
    if alpha.fract() == 0.0 && (alpha as i64) % 2 == 0 {
        return domain(format!(
            "F has a non-integrable pole at t = lambda for even integer alpha = {alpha}"
        ));
    }
    let cos_a = (alpha * PI).cos();
    let sin_a = sin_pi(alpha);
    let f = |t: f64| f_value(alpha, t, lambda, k, cos_a, sin_a);
    let head_sub = if alpha < 1.0 && spec.substitution == Substitution::PowerAlpha {
        Substitution::PowerAlpha
    } else {
        Substitution::None
    };
    // an extra breakpoint at the near-pole t ≈ λ helps for small λ
    let mut breaks = vec![0.0];
    if lambda < 0.5 {
        breaks.push(lambda);
    }
    breaks.push(0.5);
    let mut value = NeumaierSum::new();
    let mut err = 0.0;
    let mut work = 0;
    for w in breaks.windows(2) {
        let r = integrate_substituted(f, w[0], w[1], head_sub, alpha, spec)?;
        value.add(r.value);
        err += r.abs_error_estimate;
        work += r.work;
    }
    let r = integrate(f, 0.5, 1.0, spec)?;
    value.add(r.value);
    err += r.abs_error_estimate;
    work += r.work;
    Ok(EvalResult::new(value.value(), err, work))
}

/// Both sides of the extended binomial identity at one (α, λ, k).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityReport {
    pub alpha: f64,
    pub lambda: f64,
    pub k: u32,
    /// α · binom_sum
    pub lhs: f64,
    pub root_sum: f64,
    /// ∫₀¹ F dt (0 for integer α, where the coefficient vanishes)
    pub integral: f64,
    pub integral_error: f64,
    /// lhs − root_sum + (α λ^α sin απ / π)·integral
    pub residual: f64,
    /// |residual| / (|lhs| + |root_sum|)
    pub rel_residual: f64,
    /// |Im Σ_ω (1+λω)^(αk)| before projection
    pub imag_residue: f64,
}

impl IdentityReport {
    /// Right-hand side root_sum − coefficient·integral.
    pub fn rhs(&self) -> f64 {
        self.lhs - self.residual
    }
}

/// Evaluates both sides of the extended binomial identity through disjoint
/// code paths and reports the residual.
pub fn identity_check(alpha: f64, lambda: f64, k: u32, spec: &QuadratureSpec) -> Result<IdentityReport> {
    let lhs = alpha * binom_sum(alpha, k, lambda)?;
    let rs = root_sum_complex(alpha, lambda, k)?;
    if rs.imag.abs() > IMAG_RESIDUE_TOL * rs.abs_sum {
        return Err(Error::ImaginaryResidue {
            residue: rs.imag.abs(),
            scale: rs.abs_sum,
        });
    }
    let (integral, integral_error, coeff) = if alpha.fract() == 0.0 {
        (0.0, 0.0, 0.0)
    } else {
        let r = f_integral(alpha, lambda, k, spec)?;
        let coeff = alpha * lambda.powf(alpha) * sin_pi(alpha) / PI;
        (r.value, r.abs_error_estimate, coeff)
    };
    let residual = compensated_sum([lhs, -rs.real, coeff * integral]);
    let scale = lhs.abs() + rs.real.abs();
    Ok(IdentityReport {
        alpha,
        lambda,
        k,
        lhs,
        root_sum: rs.real,
        integral,
        integral_error: coeff.abs() * integral_error,
        residual,
        rel_residual: if scale > 0.0 {
            residual.abs() / scale
        } else {
            residual.abs()
        },
        imag_residue: rs.imag.abs(),
    })
}

/// Checks that α > 2 is non-integer with ⌊α⌋ even.
pub fn check_even_floor(alpha: f64) -> Result<()> {
    if !(alpha > 2.0) || !alpha.is_finite() {
        return Err(Error::Hypothesis(format!("need alpha > 2, got {alpha}")));
    }
    if alpha.fract() == 0.0 {
        return Err(Error::Hypothesis(format!("alpha = {alpha} is an integer")));
    }
    if (alpha.floor() as i64) % 2 != 0 {
        return Err(Error::Hypothesis(format!("floor(alpha) is odd for alpha = {alpha}")));
    }
    Ok(())
}

/// Closed form of ∫₀^∞ s^α / (s^(2α) − 2 s^α cos απ + 1) ds.
pub fn int1_closed(alpha: f64) -> Result<f64> {
    check_even_floor(alpha)?;
    let num = PI * ((alpha.floor() + 1.0) * PI / alpha).sin();
    let den = alpha * (alpha * PI).sin() * ((alpha + 1.0) * PI / alpha).sin();
    Ok(num / den)
}

/// Closed form of ∫₀^∞ s^(α−1) / (s^(2α) − 2 s^α cos απ + 1) ds.
pub fn int2_closed(alpha: f64) -> Result<f64> {
    check_even_floor(alpha)?;
    Ok(PI * (alpha.ceil() - alpha) / (alpha * (alpha * PI).sin()))
}

/// Which of the two semi-infinite integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SemiInfinite {
    /// numerator s^α
    First,
    /// numerator s^(α−1)
    Second,
}

impl SemiInfinite {
    pub fn from_index(which: u8) -> Result<Self> {
        match which {
            1 => Ok(Self::First),
            2 => Ok(Self::Second),
            _ => domain(format!("integral index must be 1 or 2, got {which}")),
        }
    }
}

/// The semi-infinite integrals by quadrature: on s ∈ [0, 1] in w = s^α, and
/// on the tail in u = 1/s.
pub fn int_quad(alpha: f64, which: SemiInfinite, spec: &QuadratureSpec) -> Result<EvalResult> {
    check_even_floor(alpha)?;
    let c = (alpha * PI).cos();
    let s2 = (alpha * PI).sin().powi(2);
    let inv = 1.0 / alpha;
    let head = match which {
        SemiInfinite::First => integrate(|w: f64| w.powf(inv) / ((w - c).powi(2) + s2), 0.0, 1.0, spec)?,
        SemiInfinite::Second => integrate(|w: f64| 1.0 / ((w - c).powi(2) + s2), 0.0, 1.0, spec)?,
    };
    let tail_power = match which {
        SemiInfinite::First => alpha - 2.0,
        SemiInfinite::Second => alpha - 1.0,
    };
    let tail = integrate(
        |u: f64| {
            let ua = u.powf(alpha);
            u.powf(tail_power) / ((1.0 - c * ua).powi(2) + s2 * ua * ua)
        },
        0.0,
        1.0,
        spec,
    )?;
    Ok(EvalResult::new(
        inv * head.value + tail.value,
        inv * head.abs_error_estimate + tail.abs_error_estimate,
        head.work + tail.work,
    ))
}

/// ∫₀^(1/λ) s^(α−1) (1−λs)^(αk) / (s^(2α) − 2 s^α cos απ + 1) ds for λ ∈ (0, 1].
pub fn truncated_integral(alpha: f64, k: u32, lambda: f64, spec: &QuadratureSpec) -> Result<EvalResult> {
    check_alpha(alpha)?;
    check_lambda(lambda)?;
    let c = (alpha * PI).cos();
    let s2 = sin_pi(alpha).powi(2);
    if s2 == 0.0 {
        return domain("truncated integral needs non-integer alpha");
    }
    let ak = alpha * k as f64;
    let inv = 1.0 / alpha;
    let pow_ak = |base: f64| {
        if k == 0 {
            1.0
        } else if base <= 0.0 {
            0.0
        } else {
            base.powf(ak)
        }
    };
    // s ∈ [0, 1] as w = s^α
    let head = integrate(
        |w: f64| pow_ak(1.0 - lambda * w.powf(inv)) / ((w - c).powi(2) + s2),
        0.0,
        1.0,
        spec,
    )?;
    // s ∈ [1, 1/λ] as u = 1/s ∈ [λ, 1]
    let tail = if lambda < 1.0 {
        integrate(
            |u: f64| {
                let ua = u.powf(alpha);
                u.powf(alpha - 1.0) * pow_ak(1.0 - lambda / u) / ((1.0 - c * ua).powi(2) + s2 * ua * ua)
            },
            lambda,
            1.0,
            spec,
        )?
    } else {
        EvalResult::exact(0.0)
    };
    Ok(EvalResult::new(
        inv * head.value + tail.value,
        inv * head.abs_error_estimate + tail.abs_error_estimate,
        head.work + tail.work,
    ))
}

/// One point of the small-λ expansion check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticPoint {
    pub lambda: f64,
    pub truncated: f64,
    /// (truncated − int2 + αkλ·int1) / λ
    pub defect: f64,
    pub defect_error: f64,
}

/// Defects of the first-order expansion of [`truncated_integral`] along a
/// decreasing λ sequence with every λ ≤ 0.1.
pub fn asympt_check(alpha: f64, k: u32, lambdas: &[f64], spec: &QuadratureSpec) -> Result<Vec<AsymptoticPoint>> {
    check_even_floor(alpha)?;
    if lambdas.is_empty() {
        return domain("lambda sequence is empty");
    }
    if lambdas.iter().any(|&l| !(l > 0.0 && l <= 0.1)) {
        return domain("every lambda must lie in (0, 0.1]");
    }
    if lambdas.windows(2).any(|w| w[1] >= w[0]) {
        return domain("lambda sequence must be strictly decreasing");
    }
    let i1 = int1_closed(alpha)?;
    let i2 = int2_closed(alpha)?;
    lambdas
        .iter()
        .map(|&lambda| {
            let t = truncated_integral(alpha, k, lambda, spec)?;
            let ak = alpha * k as f64;
            let defect = compensated_sum([t.value, -i2, ak * lambda * i1]) / lambda;
            Ok(AsymptoticPoint {
                lambda,
                truncated: t.value,
                defect,
                defect_error: t.abs_error_estimate / lambda,
            })
        })
        .collect()
}

/// True when |defect| strictly decreases along the sequence.
pub fn defects_decreasing(points: &[AsymptoticPoint]) -> bool {
    points.windows(2).all(|w| w[1].defect.abs() < w[0].defect.abs())
}
