//! Pointwise binomial and Mittag-Leffler inequality checks.

use serde::Serialize;

use super::record::{CheckId, InequalityRecord, Params};
use crate::binomial::binom_sum;
use crate::error::{domain, Error, Result};
use crate::mittag_leffler::{ml_power_with, MlConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BinomialKind {
    /// α Σ ≤ (x+y)^(αk), α ∈ (0,1)
    Nc,
    /// Σ ≥ (x+y)^(αk), α ∈ (0,1)
    Cnc1,
    /// Σ ≤ (x+y)^(αk), α > 1
    Cnc2,
    /// α Σ ≥ (x+y)^(αk), α ∈ (1,2]
    PartialConverse,
    /// 2^(α−1) Σ ≥ (x+y)^(αk), α > 2
    Conjecture,
}

impl BinomialKind {
    pub const ALL: [BinomialKind; 5] = [
        BinomialKind::Nc,
        BinomialKind::Cnc1,
        BinomialKind::Cnc2,
        BinomialKind::PartialConverse,
        BinomialKind::Conjecture,
    ];

    pub fn check_id(&self) -> CheckId {
        match self {
            BinomialKind::Nc => CheckId::Nc,
            BinomialKind::Cnc1 => CheckId::Cnc1,
            BinomialKind::Cnc2 => CheckId::Cnc2,
            BinomialKind::PartialConverse => CheckId::PartialConverse,
            BinomialKind::Conjecture => CheckId::Conjecture,
        }
    }

    pub fn admits(&self, alpha: f64) -> bool {
        match self {
            BinomialKind::Nc | BinomialKind::Cnc1 => alpha > 0.0 && alpha < 1.0,
            BinomialKind::Cnc2 => alpha > 1.0 && alpha.is_finite(),
            BinomialKind::PartialConverse => alpha > 1.0 && alpha <= 2.0,
            BinomialKind::Conjecture => alpha > 2.0 && alpha.is_finite(),
        }
    }
}

/// Checks one binomial inequality at (x, y), reduced by symmetry and scaling
/// to λ = min(x,y)/max(x,y). `lhs`, `rhs` and `margin` are reported in that
/// normalized form, i.e. divided by max(x,y)^(αk).
pub fn check_binomial(kind: BinomialKind, alpha: f64, k: u32, x: f64, y: f64, atol: f64) -> Result<InequalityRecord> {
    if !kind.admits(alpha) {
        return domain(format!("{} is not claimed for alpha = {alpha}", kind.check_id()));
    }
    if !(x >= 0.0 && y >= 0.0) || !x.is_finite() || !y.is_finite() {
        return domain(format!("x and y must be finite and >= 0, got ({x}, {y})"));
    }
    let big = x.max(y);
    if big == 0.0 {
        return domain("x and y must not both be 0");
    }
    let lambda = x.min(y) / big;
    let sum = if lambda == 0.0 {
        1.0
    } else {
        binom_sum(alpha, k, lambda)?
    };
    let power = (alpha * k as f64 * lambda.ln_1p()).exp();
    let (lhs, rhs) = match kind {
        BinomialKind::Nc | BinomialKind::PartialConverse => (alpha * sum, power),
        BinomialKind::Cnc1 | BinomialKind::Cnc2 => (sum, power),
        BinomialKind::Conjecture => ((alpha - 1.0).exp2() * sum, power),
    };
    let raw = match kind {
        BinomialKind::Nc | BinomialKind::Cnc2 => rhs - lhs,
        BinomialKind::Cnc1 | BinomialKind::PartialConverse | BinomialKind::Conjecture => lhs - rhs,
    };
    let err = 4.0 * f64::EPSILON * (k as f64 + 2.0) * (lhs.abs() + rhs.abs());
    let params = Params::alpha(alpha).with_k(k).with_lambda(lambda).with_x(x).with_y(y);
    Ok(InequalityRecord::new(kind.check_id(), params, lhs, rhs, raw, err, atol))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MlKind {
    /// E_α((x+y)^α) ≤ E_α(x^α) E_α(y^α), α ∈ (0,1]
    UpperMl1,
    /// E_α((x+y)^α) ≥ α E_α(x^α) E_α(y^α), α ∈ (0,1]
    LowerAlpha,
    /// E_α((x+y)^α) ≥ E_α(x^α) E_α(y^α), α ≥ 1
    SuperMl2,
}

impl MlKind {
    pub const ALL: [MlKind; 3] = [MlKind::UpperMl1, MlKind::LowerAlpha, MlKind::SuperMl2];

    pub fn check_id(&self) -> CheckId {
        match self {
            MlKind::UpperMl1 => CheckId::UpperMl1,
            MlKind::LowerAlpha => CheckId::LowerAlpha,
            MlKind::SuperMl2 => CheckId::SuperMl2,
        }
    }

    pub fn admits(&self, alpha: f64) -> bool {
        match self {
            MlKind::UpperMl1 | MlKind::LowerAlpha => alpha > 0.0 && alpha <= 1.0,
            MlKind::SuperMl2 => alpha >= 1.0 && alpha.is_finite(),
        }
    }
}

/// Compares E_α((x+y)^α) with the product E_α(x^α) E_α(y^α). The margin is
/// a log ratio, shrunk by the summed relative series errors.
pub fn check_ml(kind: MlKind, alpha: f64, x: f64, y: f64, atol: f64) -> Result<InequalityRecord> {
    check_ml_with(kind, alpha, x, y, atol, &MlConfig::default())
}

pub fn check_ml_with(kind: MlKind, alpha: f64, x: f64, y: f64, atol: f64, cfg: &MlConfig) -> Result<InequalityRecord> {
    if !kind.admits(alpha) {
        return domain(format!("{} is not claimed for alpha = {alpha}", kind.check_id()));
    }
    if !(x > 0.0 && y > 0.0) {
        return domain(format!("x and y must be > 0, got ({x}, {y})"));
    }
    if x + y > cfg.x_max {
        return Err(Error::Overflow(format!(
            "x + y = {} exceeds x_max = {}",
            x + y,
            cfg.x_max
        )));
    }
    let sum = ml_power_with(alpha, x + y, cfg)?;
    let ex = ml_power_with(alpha, x, cfg)?;
    let ey = ml_power_with(alpha, y, cfg)?;
    let factor = if kind == MlKind::LowerAlpha { alpha } else { 1.0 };
    let lhs = sum.value;
    let rhs = factor * ex.value * ey.value;
    let log_ratio = rhs.ln() - lhs.ln();
    let raw = match kind {
        MlKind::UpperMl1 => log_ratio,
        MlKind::LowerAlpha | MlKind::SuperMl2 => -log_ratio,
    };
    let err = sum.rel_error_estimate() + ex.rel_error_estimate() + ey.rel_error_estimate() + 4.0 * f64::EPSILON;
    let params = Params::alpha(alpha).with_x(x).with_y(y);
    Ok(InequalityRecord::new(kind.check_id(), params, lhs, rhs, raw, err, atol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::record::Verdict;
    use approx::assert_relative_eq;

    const ATOL: f64 = 1e-10;

    #[test]
    fn binomial_examples() {
        let r = check_binomial(BinomialKind::Nc, 0.5, 1, 1.0, 1.0, ATOL).unwrap();
        assert_relative_eq!(r.lhs, 1.0, max_relative = 1e-15);
        assert_relative_eq!(r.rhs, 2f64.sqrt(), max_relative = 1e-15);
        assert_eq!(r.verdict, Verdict::Holds);

        let r = check_binomial(BinomialKind::Cnc2, 1.5, 1, 1.0, 1.0, ATOL).unwrap();
        assert_relative_eq!(r.lhs, 2.0, max_relative = 1e-15);
        assert_relative_eq!(r.rhs, 2f64.powf(1.5), max_relative = 1e-15);
        assert_eq!(r.verdict, Verdict::Holds);

        let r = check_binomial(BinomialKind::Conjecture, 3.0, 1, 1.0, 1.0, ATOL).unwrap();
        assert_relative_eq!(r.lhs, 8.0, max_relative = 1e-15);
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn binomial_domains() {
        assert!(check_binomial(BinomialKind::Cnc1, 1.0, 1, 1.0, 0.5, ATOL).is_err());
        assert!(check_binomial(BinomialKind::PartialConverse, 2.5, 1, 1.0, 0.5, ATOL).is_err());
        assert!(check_binomial(BinomialKind::Nc, 0.5, 1, 0.0, 0.0, ATOL).is_err());
        assert!(check_binomial(BinomialKind::Nc, 0.5, 1, -1.0, 1.0, ATOL).is_err());
        // xy = 0 leaves only the j = 0 term
        let r = check_binomial(BinomialKind::Cnc1, 0.5, 3, 0.0, 2.0, ATOL).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn ml_examples() {
        let r = check_ml(MlKind::UpperMl1, 1.0, 0.7, 1.3, ATOL).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);

        let r = check_ml(MlKind::UpperMl1, 0.5, 1.0, 1.0, ATOL).unwrap();
        assert!((r.lhs - 14.44190819541496).abs() < 1e-10);
        assert!((r.rhs - 25.08988144947333).abs() < 1e-9);
        assert_eq!(r.verdict, Verdict::Holds);

        let r = check_ml(MlKind::SuperMl2, 2.0, 1.0, 2.0, ATOL).unwrap();
        assert_relative_eq!(r.lhs, 3f64.cosh(), max_relative = 1e-12);
        assert_eq!(r.verdict, Verdict::Holds);

        let r = check_ml(MlKind::LowerAlpha, 0.5, 1.0, 1.0, ATOL).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);

        assert!(matches!(
            check_ml(MlKind::SuperMl2, 1.5, 30.0, 25.0, ATOL),
            Err(Error::Overflow(_))
        ));
        assert!(check_ml(MlKind::SuperMl2, 0.5, 1.0, 1.0, ATOL).is_err());
    }
}
