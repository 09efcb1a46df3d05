use std::io::Write;

use serde::Serialize;

use super::args::Format;
use crate::verify::{shrink_margin, InequalityRecord, Params, PointError, ScanItem, Verdict};

pub const CSV_HEADER: [&str; 12] = [
    "check_id",
    "alpha",
    "k",
    "lambda",
    "x",
    "y",
    "h",
    "lhs",
    "rhs",
    "margin",
    "verdict",
    "err_estimate",
];

/// One output line. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub check_id: String,
    pub alpha: Option<f64>,
    pub k: Option<u32>,
    pub lambda: Option<f64>,
    pub x: Option<f64>,
    pub y: Option<f64>,
    pub h: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub verdict: String,
    pub err_estimate: f64,
}

impl ReportRow {
    /// A row whose margin is shrunk by `err` and then classified.
    pub fn checked(id: impl Into<String>, p: Params, lhs: f64, rhs: f64, raw: f64, err: f64, atol: f64) -> Self {
        let margin = shrink_margin(raw, err);
        Self::with_margin(id, p, lhs, rhs, margin, err, atol)
    }

    /// A row classified on `margin` as given; `err` is reported only.
    pub fn with_margin(id: impl Into<String>, p: Params, lhs: f64, rhs: f64, margin: f64, err: f64, atol: f64) -> Self {
        let finite = lhs.is_finite() && rhs.is_finite() && margin.is_finite();
        let verdict = if finite {
            Verdict::classify(margin, atol).as_str()
        } else {
            "error"
        };
        ReportRow {
            check_id: id.into(),
            alpha: p.alpha,
            k: p.k,
            lambda: p.lambda,
            x: p.x,
            y: p.y,
            h: p.h,
            lhs,
            rhs,
            margin,
            verdict: verdict.to_string(),
            err_estimate: err,
        }
    }

    pub fn error(id: impl Into<String>, p: Params) -> Self {
        ReportRow {
            check_id: id.into(),
            alpha: p.alpha,
            k: p.k,
            lambda: p.lambda,
            x: p.x,
            y: p.y,
            h: p.h,
            lhs: f64::NAN,
            rhs: f64::NAN,
            margin: f64::NAN,
            verdict: "error".to_string(),
            err_estimate: f64::NAN,
        }
    }
}

impl From<&InequalityRecord> for ReportRow {
    fn from(r: &InequalityRecord) -> Self {
        let mut id = r.check_id.as_str().to_string();
        if r.informational {
            id.push_str("_open");
        }
        let p = r.params;
        ReportRow {
            check_id: id,
            alpha: p.alpha,
            k: p.k,
            lambda: p.lambda,
            x: p.x,
            y: p.y,
            h: p.h,
            lhs: r.lhs,
            rhs: r.rhs,
            margin: r.margin,
            verdict: r.verdict.as_str().to_string(),
            err_estimate: r.err_estimate,
        }
    }
}

impl From<&PointError> for ReportRow {
    fn from(e: &PointError) -> Self {
        ReportRow::error(e.check_id.as_str(), e.params)
    }
}

impl From<&ScanItem> for ReportRow {
    fn from(item: &ScanItem) -> Self {
        match item {
            ScanItem::Record(r) => r.into(),
            ScanItem::Error(e) => e.into(),
        }
    }
}

/// 1 if any row fails; else 2 if any row is an error; else 0 if any row
/// holds; else 3.
pub fn exit_code(rows: &[ReportRow]) -> i32 {
    let has = |v: &str| rows.iter().any(|r| r.verdict == v);
    if has("fails") {
        1
    } else if has("error") {
        2
    } else if has("holds") {
        0
    } else {
        3
    }
}

pub fn write_rows<W: Write>(out: W, format: Format, rows: &[ReportRow]) -> std::io::Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            w.write_record(CSV_HEADER)?;
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()
        }
        Format::Jsonl => {
            let mut out = out;
            for row in rows {
                serde_json::to_writer(&mut out, row)?;
                out.write_all(b"\n")?;
            }
            out.flush()
        }
    }
}
