use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::verify::DEFAULT_ATOL;

/// Parses `start:stop:step`, `start:stop` (step 1), a comma list, or a single
/// number. Lattice points are rounded to 13 significant digits, and a point
/// within rounding of the stop is replaced by the stop, so `0.05:1:0.05` ends
/// exactly at 1; no point beyond the stop is produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RealList(pub Vec<f64>);

fn parse_real(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("malformed number '{s}'"))?;
    if !v.is_finite() {
        return Err(format!("number must be finite, got '{s}'"));
    }
    Ok(v)
}

fn snap(v: f64) -> f64 {
    format!("{v:.12e}").parse().unwrap_or(v)
}

fn lattice(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, String> {
    if !(step > 0.0) {
        return Err(format!("range step must be > 0, got {step}"));
    }
    if stop < start {
        return Err(format!("range stop {stop} is below start {start}"));
    }
    let count = ((stop - start) / step + 0.5).floor();
    if count > 10_000_000.0 {
        return Err("range has too many points".into());
    }
    let slack = 1e-9 * step;
    Ok((0..=count as usize)
        .map(|i| snap(start + i as f64 * step))
        .filter(|&v| v <= stop + slack)
        .map(|v| if (v - stop).abs() <= slack { stop } else { v })
        .collect())
}

impl FromStr for RealList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            let (start, stop, step) = match parts.as_slice() {
                [a, b] => (parse_real(a)?, parse_real(b)?, 1.0),
                [a, b, c] => (parse_real(a)?, parse_real(b)?, parse_real(c)?),
                _ => return Err(format!("malformed range '{s}', expected start:stop:step")),
            };
            return lattice(start, stop, step).map(RealList);
        }
        s.split(',')
            .map(parse_real)
            .collect::<Result<Vec<_>, _>>()
            .map(RealList)
    }
}

/// Integer counterpart of [`RealList`].
#[derive(Debug, Clone, PartialEq)]
pub struct IntList(pub Vec<u32>);

fn parse_int(s: &str) -> Result<u32, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("malformed nonnegative integer '{s}'"))
}

impl FromStr for IntList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            let (start, stop, step) = match parts.as_slice() {
                [a, b] => (parse_int(a)?, parse_int(b)?, 1),
                [a, b, c] => (parse_int(a)?, parse_int(b)?, parse_int(c)?),
                _ => return Err(format!("malformed range '{s}', expected start:stop:step")),
            };
            if step == 0 || stop < start {
                return Err(format!("empty or invalid range '{s}'"));
            }
            return Ok(IntList((start..=stop).step_by(step as usize).collect()));
        }
        s.split(',').map(parse_int).collect::<Result<Vec<_>, _>>().map(IntList)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

#[derive(Debug, Parser)]
#[command(
    name = "mlineq",
    version,
    about = "Mittag-Leffler evaluation and inequality verification"
)]
pub struct Cli {
    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Margin tolerance separating holds/fails from inconclusive
    #[arg(long, global = true, default_value_t = DEFAULT_ATOL)]
    pub atol: f64,
    /// Absolute quadrature tolerance (overrides MLINEQ_QUAD_TOL)
    #[arg(long, global = true)]
    pub quad_tol: Option<f64>,
    /// Monte Carlo seed
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Worker threads for scans and Monte Carlo
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a single function value
    Eval(EvalArgs),
    /// Check identities and closed forms
    Verify(VerifyArgs),
    /// Scan an inequality over a parameter grid
    Scan(ScanArgs),
    /// Monte Carlo checks with positive stable variables
    Mc(McArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalWhat {
    Ml,
    MlPower,
    MlDeriv,
    Phi,
    Psi,
    BinomSum,
    RootSum,
    Int1,
    Int2,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(value_enum)]
    pub what: EvalWhat,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyWhat {
    Identity,
    Integrals,
    Asympt,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub what: VerifyWhat,
    #[arg(long)]
    pub alpha: RealList,
    #[arg(long)]
    pub k: Option<IntList>,
    #[arg(long)]
    pub lambda: Option<RealList>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanWhat {
    Nc,
    Cnc1,
    Cnc2,
    Partial,
    Conjecture,
    Ml1,
    Ml2,
    MlLower,
    Logshape,
    Logderiv,
    Cm,
    #[value(name = "section56")]
    ProofStage,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CmTargetArg {
    RecipMl,
    Phi,
    Psi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProofStageArg {
    CosineSum,
    BigLambda,
    Goal3a,
    CadGrid,
    WithSine,
    FinalGoal,
    Goal3Monotone,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(value_enum)]
    pub what: ScanWhat,
    #[arg(long)]
    pub alpha: Option<RealList>,
    #[arg(long)]
    pub k: Option<IntList>,
    #[arg(long)]
    pub lambda: Option<RealList>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<RealList>,
    #[arg(long)]
    pub y: Option<RealList>,
    /// Finite-difference step (logshape, cm)
    #[arg(long)]
    pub h: Option<f64>,
    /// Function probed by `cm`
    #[arg(long, value_enum, default_value_t = CmTargetArg::RecipMl)]
    pub target: CmTargetArg,
    /// Highest difference order for `cm`
    #[arg(long, default_value_t = 6)]
    pub n_max: u32,
    /// Family checked by `section56`
    #[arg(long, value_enum)]
    pub kind: Option<ProofStageArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum McWhat {
    Represent,
    Dominance,
    Laplace,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[arg(value_enum)]
    pub what: McWhat,
    #[arg(long)]
    pub alpha: RealList,
    #[arg(long)]
    pub x: Option<RealList>,
    #[arg(long)]
    pub y: Option<f64>,
    #[arg(long)]
    pub lambda: Option<RealList>,
    /// Thresholds for `dominance`
    #[arg(long)]
    pub t: Option<RealList>,
    #[arg(long, default_value_t = 200_000)]
    pub n: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_ranges() {
        let r: RealList = "0.05:1:0.05".parse().unwrap();
        assert_eq!(r.0.len(), 20);
        assert_eq!(r.0[19], 1.0);
        assert_eq!(r.0[2], 0.15);
        let r: RealList = "0:1:0.3".parse().unwrap();
        assert_eq!(r.0, vec![0.0, 0.3, 0.6, 0.9]);
        let r: RealList = "0:1:0.4".parse().unwrap();
        assert_eq!(r.0, vec![0.0, 0.4, 0.8]);
        let r: RealList = "-1,0,2.5".parse().unwrap();
        assert_eq!(r.0, vec![-1.0, 0.0, 2.5]);
        assert!("1:0:0.1".parse::<RealList>().is_err());
        assert!("0:1:0".parse::<RealList>().is_err());
        assert!("abc".parse::<RealList>().is_err());
        assert!("1:2:3:4".parse::<RealList>().is_err());
    }

    #[test]
    fn int_ranges() {
        assert_eq!("1:10".parse::<IntList>().unwrap().0, (1..=10).collect::<Vec<_>>());
        assert_eq!("0:6:3".parse::<IntList>().unwrap().0, vec![0, 3, 6]);
        assert_eq!("3".parse::<IntList>().unwrap().0, vec![3]);
        assert!("-1:3".parse::<IntList>().is_err());
    }
}
