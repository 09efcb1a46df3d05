use serde::Serialize;

/// A computed value with an absolute error estimate and the amount of work
/// spent on it (series terms or integrand evaluations).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub work: usize,
}

impl EvalResult {
    pub fn new(value: f64, abs_error_estimate: f64, work: usize) -> Self {
        debug_assert!(abs_error_estimate >= 0.0);
        Self {
            value,
            abs_error_estimate,
            work: work.max(1),
        }
    }

    /// Exact value, e.g. a closed form or a fast path.
    pub fn exact(value: f64) -> Self {
        Self::new(value, 0.0, 1)
    }

    pub fn rel_error_estimate(&self) -> f64 {
        if self.value == 0.0 {
            self.abs_error_estimate
        } else {
            self.abs_error_estimate / self.value.abs()
        }
    }
}
