use std::fmt;

use serde::Serialize;

/// Default absolute tolerance separating holds/fails from inconclusive.
pub const DEFAULT_ATOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

impl Verdict {
    pub fn classify(margin: f64, atol: f64) -> Self {
        if margin > atol {
            Verdict::Holds
        } else if margin < -atol {
            Verdict::Fails
        } else {
            Verdict::Inconclusive
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckId {
    Nc,
    Cnc1,
    Cnc2,
    PartialConverse,
    Conjecture,
    UpperMl1,
    LowerAlpha,
    SuperMl2,
    LogShape,
    LogDeriv,
    CmRecipMl,
    CmPhi,
    CmPsi,
    CosineSum,
    BigLambda,
    Goal3a,
    CadGrid,
    WithSine,
    FinalGoal,
    Goal3Monotone,
}

impl CheckId {
    pub fn as_str(&self) -> &'static str {
        match self {
            CheckId::Nc => "nc",
            CheckId::Cnc1 => "cnc1",
            CheckId::Cnc2 => "cnc2",
            CheckId::PartialConverse => "partial_converse",
            CheckId::Conjecture => "conjecture",
            CheckId::UpperMl1 => "upper_ml1",
            CheckId::LowerAlpha => "lower_alpha",
            CheckId::SuperMl2 => "super_ml2",
            CheckId::LogShape => "log_shape",
            CheckId::LogDeriv => "log_deriv",
            CheckId::CmRecipMl => "cm_recip_ml",
            CheckId::CmPhi => "cm_phi",
            CheckId::CmPsi => "cm_psi",
            CheckId::CosineSum => "cosine_sum",
            CheckId::BigLambda => "big_lambda",
            CheckId::Goal3a => "goal3a",
            CheckId::CadGrid => "cad_grid",
            CheckId::WithSine => "with_sine",
            CheckId::FinalGoal => "final_goal",
            CheckId::Goal3Monotone => "goal3_monotone",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Named parameters of one check; absent ones stay `None`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Params {
    pub alpha: Option<f64>,
    pub k: Option<u32>,
    pub lambda: Option<f64>,
    pub x: Option<f64>,
    pub y: Option<f64>,
    pub h: Option<f64>,
}

impl Params {
    pub fn alpha(alpha: f64) -> Self {
        Params {
            alpha: Some(alpha),
            ..Default::default()
        }
    }

    pub fn with_k(mut self, k: u32) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = Some(lambda);
        self
    }

    pub fn with_x(mut self, x: f64) -> Self {
        self.x = Some(x);
        self
    }

    pub fn with_y(mut self, y: f64) -> Self {
        self.y = Some(y);
        self
    }

    pub fn with_h(mut self, h: f64) -> Self {
        self.h = Some(h);
        self
    }
}

/// One verification instance. `margin` is signed so that positive means the
/// claimed inequality is satisfied; it has already been shrunk toward zero by
/// `err_estimate`, so the verdict is a pure function of `margin` and `atol`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InequalityRecord {
    pub check_id: CheckId,
    pub params: Params,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub verdict: Verdict,
    pub err_estimate: f64,
    /// The claim is open; the verdict is recorded without asserting it.
    pub informational: bool,
}

/// Moves `raw` toward zero by `err`, never past it.
pub fn shrink_margin(raw: f64, err: f64) -> f64 {
    if raw.is_nan() {
        return f64::NAN;
    }
    let m = (raw.abs() - err).max(0.0);
    if raw < 0.0 {
        -m
    } else {
        m
    }
}

impl InequalityRecord {
    /// Builds a record from a raw margin and its error estimate.
    pub fn new(
        check_id: CheckId,
        params: Params,
        lhs: f64,
        rhs: f64,
        raw_margin: f64,
        err_estimate: f64,
        atol: f64,
    ) -> Self {
        let margin = shrink_margin(raw_margin, err_estimate);
        let verdict = if margin.is_nan() {
            Verdict::Inconclusive
        } else {
            Verdict::classify(margin, atol)
        };
        InequalityRecord {
            check_id,
            params,
            lhs,
            rhs,
            margin,
            verdict,
            err_estimate,
            informational: false,
        }
    }

    pub fn informational(mut self) -> Self {
        self.informational = true;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trichotomy() {
        assert_eq!(Verdict::classify(2e-10, 1e-10), Verdict::Holds);
        assert_eq!(Verdict::classify(-2e-10, 1e-10), Verdict::Fails);
        assert_eq!(Verdict::classify(1e-10, 1e-10), Verdict::Inconclusive);
        assert_eq!(Verdict::classify(-1e-10, 1e-10), Verdict::Inconclusive);
        assert_eq!(Verdict::classify(0.0, 1e-10), Verdict::Inconclusive);
    }

    #[test]
    fn shrinking() {
        assert_eq!(shrink_margin(1.0, 0.25), 0.75);
        assert_eq!(shrink_margin(-1.0, 0.25), -0.75);
        assert_eq!(shrink_margin(0.1, 0.25), 0.0);
        assert_eq!(shrink_margin(-0.1, 0.25), 0.0);
        let r = InequalityRecord::new(CheckId::Nc, Params::alpha(0.5), 1.0, 1.0, 1e-9, 1e-9, 1e-10);
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }
}
