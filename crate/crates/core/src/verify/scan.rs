//! Grid scans over the pointwise checks, run in parallel with results
//! restored to grid order.

use rayon::prelude::*;
use serde::Serialize;

use super::checks::{check_binomial, check_ml, BinomialKind, MlKind};
use super::record::{CheckId, InequalityRecord, Params, Verdict, DEFAULT_ATOL};
use crate::error::{domain, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    pub alpha_values: Vec<f64>,
    pub k_values: Vec<u32>,
    pub lambda_values: Vec<f64>,
    pub xy_values: Vec<(f64, f64)>,
    pub atol: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            alpha_values: Vec::new(),
            k_values: Vec::new(),
            lambda_values: Vec::new(),
            xy_values: Vec::new(),
            atol: DEFAULT_ATOL,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.atol > 0.0) {
            return domain(format!("atol must be > 0, got {}", self.atol));
        }
        if self.alpha_values.iter().any(|a| !a.is_finite()) {
            return domain("alpha values must be finite");
        }
        if self.lambda_values.iter().any(|&l| !(l > 0.0 && l <= 1.0)) {
            return domain("lambda values must lie in (0, 1]");
        }
        if self.xy_values.iter().any(|&(x, y)| !(x >= 0.0 && y >= 0.0)) {
            return domain("x and y values must be >= 0");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ScanCheck {
    /// over α × k × λ, evaluated at (x, y) = (λ, 1)
    Binomial(BinomialKind),
    /// over α × (x, y)
    Ml(MlKind),
}

impl ScanCheck {
    pub fn check_id(&self) -> CheckId {
        match self {
            ScanCheck::Binomial(k) => k.check_id(),
            ScanCheck::Ml(k) => k.check_id(),
        }
    }
}

/// A grid point whose evaluation failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointError {
    pub check_id: CheckId,
    pub params: Params,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ScanItem {
    Record(InequalityRecord),
    Error(PointError),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ScanSummary {
    pub holds: usize,
    pub fails: usize,
    pub inconclusive: usize,
    pub errors: usize,
}

impl ScanSummary {
    pub fn from_items(items: &[ScanItem]) -> Self {
        let mut s = ScanSummary::default();
        for item in items {
            match item {
                ScanItem::Record(r) => match r.verdict {
                    Verdict::Holds => s.holds += 1,
                    Verdict::Fails => s.fails += 1,
                    Verdict::Inconclusive => s.inconclusive += 1,
                },
                ScanItem::Error(_) => s.errors += 1,
            }
        }
        s
    }

    pub fn total(&self) -> usize {
        self.holds + self.fails + self.inconclusive + self.errors
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanOutput {
    pub items: Vec<ScanItem>,
    pub summary: ScanSummary,
}

impl ScanOutput {
    pub fn records(&self) -> impl Iterator<Item = &InequalityRecord> {
        self.items.iter().filter_map(|i| match i {
            ScanItem::Record(r) => Some(r),
            ScanItem::Error(_) => None,
        })
    }
}

#[derive(Clone, Copy)]
enum Point {
    Binomial {
        kind: BinomialKind,
        alpha: f64,
        k: u32,
        lambda: f64,
    },
    Ml {
        kind: MlKind,
        alpha: f64,
        x: f64,
        y: f64,
    },
}

impl Point {
    fn eval(self, atol: f64) -> ScanItem {
        let (id, params, result) = match self {
            Point::Binomial { kind, alpha, k, lambda } => (
                kind.check_id(),
                Params::alpha(alpha)
                    .with_k(k)
                    .with_lambda(lambda)
                    .with_x(lambda)
                    .with_y(1.0),
                check_binomial(kind, alpha, k, lambda, 1.0, atol),
            ),
            Point::Ml { kind, alpha, x, y } => (
                kind.check_id(),
                Params::alpha(alpha).with_x(x).with_y(y),
                check_ml(kind, alpha, x, y, atol),
            ),
        };
        match result {
            Ok(r) => ScanItem::Record(r),
            Err(e) => ScanItem::Error(PointError {
                check_id: id,
                params,
                message: e.to_string(),
            }),
        }
    }
}

/// Runs every check over the grid. Items come out in lexicographic grid order
/// (check, α, k, λ) resp. (check, α, (x, y)), independent of the worker count;
/// per-point errors are recorded as items and do not abort the scan.
pub fn scan(grid: &GridSpec, checks: &[ScanCheck]) -> Result<ScanOutput> {
    grid.validate()?;
    let mut points = Vec::new();
    for check in checks {
        match *check {
            ScanCheck::Binomial(kind) => {
                for &alpha in &grid.alpha_values {
                    for &k in &grid.k_values {
                        for &lambda in &grid.lambda_values {
                            points.push(Point::Binomial { kind, alpha, k, lambda });
                        }
                    }
                }
            }
            ScanCheck::Ml(kind) => {
                for &alpha in &grid.alpha_values {
                    for &(x, y) in &grid.xy_values {
                        points.push(Point::Ml { kind, alpha, x, y });
                    }
                }
            }
        }
    }
    let atol = grid.atol;
    let items: Vec<ScanItem> = points.into_par_iter().map(|p| p.eval(atol)).collect();
    let summary = ScanSummary::from_items(&items);
    Ok(ScanOutput { items, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_checks_give_empty_stream() {
        let grid = GridSpec {
            alpha_values: vec![0.5],
            k_values: vec![1],
            lambda_values: vec![0.5],
            ..Default::default()
        };
        let out = scan(&grid, &[]).unwrap();
        assert!(out.items.is_empty());
        assert_eq!(out.summary.total(), 0);
    }

    #[test]
    fn domain_errors_are_recorded() {
        let grid = GridSpec {
            alpha_values: vec![0.5, 1.0, 0.7],
            k_values: vec![1, 2],
            lambda_values: vec![0.5, 1.0],
            ..Default::default()
        };
        let out = scan(&grid, &[ScanCheck::Binomial(BinomialKind::Cnc1)]).unwrap();
        assert_eq!(out.items.len(), 12);
        assert_eq!(out.summary.errors, 4);
        assert_eq!(out.summary.fails, 0);
        assert!(matches!(&out.items[4], ScanItem::Error(e) if e.params.alpha == Some(1.0)));
    }

    #[test]
    fn order_is_lexicographic() {
        let grid = GridSpec {
            alpha_values: vec![0.3, 0.6],
            k_values: vec![1, 2, 3],
            lambda_values: vec![0.2, 0.4],
            ..Default::default()
        };
        let out = scan(&grid, &[ScanCheck::Binomial(BinomialKind::Nc)]).unwrap();
        let keys: Vec<_> = out
            .records()
            .map(|r| (r.params.alpha.unwrap(), r.params.k.unwrap(), r.params.lambda.unwrap()))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(keys, sorted);
    }

    #[test]
    fn invalid_grid() {
        let grid = GridSpec {
            lambda_values: vec![1.5],
            ..Default::default()
        };
        assert!(scan(&grid, &[]).is_err());
    }
}
