//! Command-line front end: `eval`, `verify`, `scan` and `mc` subcommands that
//! write CSV or JSON-lines reports and map the verdicts to an exit code.

mod args;
mod report;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};

use clap::Parser;

pub use args::{Cli, Command, Format, IntList, RealList};
pub use report::{exit_code, write_rows, ReportRow, CSV_HEADER};

use crate::binomial::{
    asympt_check, binom_sum, identity_check, int1_closed, int2_closed, int_quad, root_sum, SemiInfinite,
};
use crate::error::{Error, Result};
use crate::mittag_leffler::{ml, ml_deriv, ml_power, phi, psi};
use crate::quadrature::QuadratureSpec;
use crate::stable::{laplace_check, mc_ml_estimate, mc_superadditivity};
use crate::verify::{
    check_cm_probe, check_log_shape, check_logderiv_monotone, check_proof_stage, cm_quadrature, scan, BinomialKind,
    CadLattice, CmTarget, GridSpec, InequalityRecord, MlKind, Params, ProofStageKind, ProofStageParams, ScanCheck,
    CM_STEP, SHAPE_STEP,
};
use crate::EvalResult;
use args::*;

/// Relative residual accepted by `verify identity`.
pub const IDENTITY_TOL: f64 = 1e-7;
/// Relative quadrature/closed-form agreement accepted by `verify integrals`.
pub const INTEGRALS_TOL: f64 = 1e-8;
/// Largest |defect| accepted at the end of `verify asympt`.
pub const ASYMPT_BOUND: f64 = 0.05;
/// z-score bound for Monte Carlo rows.
pub const MC_Z: f64 = 4.0;
/// Multiple of the binomial stderr allowed in dominance rows.
pub const DOMINANCE_SIGMAS: f64 = 3.0;

struct Ctx {
    atol: f64,
    spec: QuadratureSpec,
    quad_tol_given: bool,
    seed: u64,
    diag: Vec<String>,
}

impl Ctx {
    fn note(&mut self, id: &str, p: Params, e: &Error) -> ReportRow {
        self.diag.push(format!("{id} {}: {e}", describe(&p)));
        ReportRow::error(id, p)
    }
}

fn describe(p: &Params) -> String {
    let mut parts = Vec::new();
    let fields = [
        ("alpha", p.alpha),
        ("lambda", p.lambda),
        ("x", p.x),
        ("y", p.y),
        ("h", p.h),
    ];
    for (name, v) in fields {
        if let Some(v) = v {
            parts.push(format!("{name}={v}"));
        }
    }
    if let Some(k) = p.k {
        parts.push(format!("k={k}"));
    }
    format!("[{}]", parts.join(" "))
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

fn required<T: Clone>(v: &Option<T>, flag: &str) -> Result<T> {
    v.clone()
        .ok_or_else(|| usage(format!("missing required flag --{flag}")))
}

fn eval_row(id: &str, p: Params, r: &EvalResult, ctx: &Ctx) -> ReportRow {
    let budget = ctx.spec.abs_tol.max(ctx.spec.rel_tol * r.value.abs());
    let raw = 1.0 - r.abs_error_estimate / budget;
    ReportRow::with_margin(id, p, r.value, budget, raw, r.abs_error_estimate, ctx.atol)
}

fn run_eval(a: &EvalArgs, ctx: &mut Ctx) -> Result<Vec<ReportRow>> {
    let alpha = a.alpha;
    let spec = ctx.spec;
    let x = || required(&a.x, "x");
    let k = || required(&a.k, "k");
    let lambda = || required(&a.lambda, "lambda");
    let (id, p, r) = match a.what {
        EvalWhat::Ml => ("eval_ml", Params::alpha(alpha).with_x(x()?), ml(alpha, x()?)?),
        EvalWhat::MlPower => (
            "eval_ml_power",
            Params::alpha(alpha).with_x(x()?),
            ml_power(alpha, x()?)?,
        ),
        EvalWhat::MlDeriv => (
            "eval_ml_deriv",
            Params::alpha(alpha).with_x(x()?),
            ml_deriv(alpha, x()?)?,
        ),
        EvalWhat::Phi => ("eval_phi", Params::alpha(alpha).with_x(x()?), phi(alpha, x()?, &spec)?),
        EvalWhat::Psi => ("eval_psi", Params::alpha(alpha).with_x(x()?), psi(alpha, x()?, &spec)?),
        EvalWhat::BinomSum => {
            let (k, l) = (k()?, lambda()?);
            let v = binom_sum(alpha, k, l)?;
            let err = 4.0 * f64::EPSILON * (k as f64 + 2.0) * v;
            (
                "eval_binom_sum",
                Params::alpha(alpha).with_k(k).with_lambda(l),
                EvalResult::new(v, err, k as usize + 1),
            )
        }
        EvalWhat::RootSum => {
            let (k, l) = (k()?, lambda()?);
            let v = root_sum(alpha, l, k)?;
            let err = 4.0 * f64::EPSILON * alpha.ceil() * v.abs();
            (
                "eval_root_sum",
                Params::alpha(alpha).with_k(k).with_lambda(l),
                EvalResult::new(v, err, 1),
            )
        }
        EvalWhat::Int1 => {
            let v = int1_closed(alpha)?;
            (
                "eval_int1",
                Params::alpha(alpha),
                EvalResult::new(v, 8.0 * f64::EPSILON * v.abs(), 1),
            )
        }
        EvalWhat::Int2 => {
            let v = int2_closed(alpha)?;
            (
                "eval_int2",
                Params::alpha(alpha),
                EvalResult::new(v, 8.0 * f64::EPSILON * v.abs(), 1),
            )
        }
    };
    Ok(vec![eval_row(id, p, &r, ctx)])
}

fn run_verify(a: &VerifyArgs, ctx: &mut Ctx) -> Result<Vec<ReportRow>> {
    let spec = ctx.spec;
    let atol = ctx.atol;
    let mut rows = Vec::new();
    match a.what {
        VerifyWhat::Identity => {
            let ks = required(&a.k, "k")?.0;
            let lambdas = required(&a.lambda, "lambda")?.0;
            for &alpha in &a.alpha.0 {
                for &k in &ks {
                    for &lambda in &lambdas {
                        let p = Params::alpha(alpha).with_k(k).with_lambda(lambda);
                        rows.push(match identity_check(alpha, lambda, k, &spec) {
                            Ok(r) => {
                                let margin = 1.0 - r.rel_residual / IDENTITY_TOL;
                                ReportRow::with_margin("identity", p, r.lhs, r.rhs(), margin, r.integral_error, atol)
                            }
                            Err(e) => ctx.note("identity", p, &e),
                        });
                    }
                }
            }
        }
        VerifyWhat::Integrals => {
            for &alpha in &a.alpha.0 {
                for (id, which) in [("int1", SemiInfinite::First), ("int2", SemiInfinite::Second)] {
                    let p = Params::alpha(alpha);
                    let closed = match which {
                        SemiInfinite::First => int1_closed(alpha),
                        SemiInfinite::Second => int2_closed(alpha),
                    };
                    let quad = int_quad(alpha, which, &spec);
                    rows.push(match (quad, closed) {
                        (Ok(q), Ok(c)) => {
                            let margin = 1.0 - (q.value - c).abs() / (INTEGRALS_TOL * c.abs());
                            ReportRow::with_margin(id, p, q.value, c, margin, q.abs_error_estimate, atol)
                        }
                        (Err(e), _) | (_, Err(e)) => ctx.note(id, p, &e),
                    });
                }
            }
        }
        VerifyWhat::Asympt => {
            let ks = required(&a.k, "k")?.0;
            let lambdas = required(&a.lambda, "lambda")?.0;
            for &alpha in &a.alpha.0 {
                for &k in &ks {
                    let p = Params::alpha(alpha).with_k(k);
                    let pts = match asympt_check(alpha, k, &lambdas, &spec) {
                        Ok(pts) => pts,
                        Err(e) => {
                            rows.push(ctx.note("asympt", p, &e));
                            continue;
                        }
                    };
                    for w in pts.windows(2) {
                        let (prev, cur) = (w[0].defect.abs(), w[1].defect.abs());
                        let err = w[0].defect_error + w[1].defect_error;
                        let pp = p.with_lambda(w[1].lambda).with_x(w[0].lambda);
                        rows.push(ReportRow::checked(
                            "asympt_decreasing",
                            pp,
                            cur,
                            prev,
                            prev - cur,
                            err,
                            atol,
                        ));
                    }
                    if let Some(last) = pts.last() {
                        let d = last.defect.abs();
                        let pp = p.with_lambda(last.lambda);
                        rows.push(ReportRow::checked(
                            "asympt_bound",
                            pp,
                            d,
                            ASYMPT_BOUND,
                            ASYMPT_BOUND - d,
                            last.defect_error,
                            atol,
                        ));
                    }
                }
            }
        }
    }
    Ok(rows)
}

fn records(recs: Vec<InequalityRecord>) -> Vec<ReportRow> {
    recs.iter().map(ReportRow::from).collect()
}

fn list(v: &Option<RealList>, flag: &str) -> Result<Vec<f64>> {
    Ok(required(v, flag)?.0)
}

fn run_scan(a: &ScanArgs, ctx: &mut Ctx) -> Result<Vec<ReportRow>> {
    let atol = ctx.atol;
    let binomial = match a.what {
        ScanWhat::Nc => Some(BinomialKind::Nc),
        ScanWhat::Cnc1 => Some(BinomialKind::Cnc1),
        ScanWhat::Cnc2 => Some(BinomialKind::Cnc2),
        ScanWhat::Partial => Some(BinomialKind::PartialConverse),
        ScanWhat::Conjecture => Some(BinomialKind::Conjecture),
        _ => None,
    };
    let ml_kind = match a.what {
        ScanWhat::Ml1 => Some(MlKind::UpperMl1),
        ScanWhat::Ml2 => Some(MlKind::SuperMl2),
        ScanWhat::MlLower => Some(MlKind::LowerAlpha),
        _ => None,
    };
    if let Some(kind) = binomial {
        let grid = GridSpec {
            alpha_values: list(&a.alpha, "alpha")?,
            k_values: required(&a.k, "k")?.0,
            lambda_values: list(&a.lambda, "lambda")?,
            xy_values: Vec::new(),
            atol,
        };
        return scan_rows(&grid, ScanCheck::Binomial(kind), ctx);
    }
    if let Some(kind) = ml_kind {
        let xs = list(&a.x, "x")?;
        let ys = list(&a.y, "y")?;
        let grid = GridSpec {
            alpha_values: list(&a.alpha, "alpha")?,
            xy_values: xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y))).collect(),
            atol,
            ..GridSpec::default()
        };
        return scan_rows(&grid, ScanCheck::Ml(kind), ctx);
    }
    let mut rows = Vec::new();
    match a.what {
        ScanWhat::Logshape => {
            let xs = list(&a.x, "x")?;
            let h = a.h.unwrap_or(SHAPE_STEP);
            for alpha in list(&a.alpha, "alpha")? {
                rows.extend(records(check_log_shape(alpha, &xs, h, atol)?));
            }
        }
        ScanWhat::Logderiv => {
            let xs = list(&a.x, "x")?;
            for alpha in list(&a.alpha, "alpha")? {
                rows.extend(records(check_logderiv_monotone(alpha, &xs, atol)?));
            }
        }
        ScanWhat::Cm => {
            let xs = list(&a.x, "x")?;
            let h = a.h.unwrap_or(CM_STEP);
            let target = match a.target {
                CmTargetArg::RecipMl => CmTarget::RecipMl,
                CmTargetArg::Phi => CmTarget::Phi,
                CmTargetArg::Psi => CmTarget::Psi,
            };
            let mut spec = cm_quadrature();
            if ctx.quad_tol_given {
                spec.abs_tol = ctx.spec.abs_tol;
            }
            for alpha in list(&a.alpha, "alpha")? {
                rows.extend(records(check_cm_probe(target, alpha, a.n_max, &xs, h, &spec, atol)?));
            }
        }
        ScanWhat::ProofStage => {
            let kind = match required(&a.kind, "kind")? {
                ProofStageArg::CosineSum => ProofStageKind::CosineSum,
                ProofStageArg::BigLambda => ProofStageKind::BigLambda,
                ProofStageArg::Goal3a => ProofStageKind::Goal3a,
                ProofStageArg::CadGrid => ProofStageKind::CadGrid,
                ProofStageArg::WithSine => ProofStageKind::WithSine,
                ProofStageArg::FinalGoal => ProofStageKind::FinalGoal,
                ProofStageArg::Goal3Monotone => ProofStageKind::Goal3Monotone,
            };
            let p = ProofStageParams {
                alphas: a.alpha.clone().map(|l| l.0).unwrap_or_default(),
                ks: a.k.clone().map(|l| l.0).unwrap_or_else(|| vec![1]),
                lambdas: a.lambda.clone().map(|l| l.0).unwrap_or_default(),
                cad: CadLattice::default(),
            };
            rows.extend(records(check_proof_stage(kind, &p, &ctx.spec, atol)?));
        }
        _ => unreachable!("pointwise scans handled above"),
    }
    Ok(rows)
}

fn scan_rows(grid: &GridSpec, check: ScanCheck, ctx: &mut Ctx) -> Result<Vec<ReportRow>> {
    let out = scan(grid, &[check])?;
    for item in &out.items {
        if let crate::verify::ScanItem::Error(e) = item {
            ctx.diag
                .push(format!("{} {}: {}", e.check_id, describe(&e.params), e.message));
        }
    }
    Ok(out.items.iter().map(ReportRow::from).collect())
}

fn run_mc(a: &McArgs, ctx: &mut Ctx) -> Result<Vec<ReportRow>> {
    let (atol, seed, n) = (ctx.atol, ctx.seed, a.n);
    let mut rows = Vec::new();
    match a.what {
        McWhat::Represent => {
            let xs = list(&a.x, "x")?;
            for &alpha in &a.alpha.0 {
                for &x in &xs {
                    let p = Params::alpha(alpha).with_x(x);
                    rows.push(match mc_ml_estimate(alpha, x, n, seed) {
                        Ok(s) => {
                            if s.variance_warning {
                                ctx.diag
                                    .push(format!("mc_represent {}: stderr/mean above 5%", describe(&p)));
                            }
                            ReportRow::with_margin(
                                "mc_represent",
                                p,
                                s.mean,
                                s.target,
                                MC_Z - s.z_score.abs(),
                                s.stderr,
                                atol,
                            )
                        }
                        Err(e) => ctx.note("mc_represent", p, &e),
                    });
                }
            }
        }
        McWhat::Laplace => {
            let lambdas = list(&a.lambda, "lambda")?;
            for &alpha in &a.alpha.0 {
                for &lambda in &lambdas {
                    let p = Params::alpha(alpha).with_lambda(lambda);
                    rows.push(match laplace_check(alpha, lambda, n, seed) {
                        Ok(s) => ReportRow::with_margin(
                            "mc_laplace",
                            p,
                            s.mean,
                            s.target,
                            MC_Z - s.z_score.abs(),
                            s.stderr,
                            atol,
                        ),
                        Err(e) => ctx.note("mc_laplace", p, &e),
                    });
                }
            }
        }
        McWhat::Dominance => {
            let xs = list(&a.x, "x")?;
            let y = required(&a.y, "y")?;
            let ts = list(&a.t, "t")?;
            for &alpha in &a.alpha.0 {
                for &x in &xs {
                    let p = Params::alpha(alpha).with_x(x).with_y(y);
                    let rep = match mc_superadditivity(alpha, x, y, n, seed, &ts) {
                        Ok(r) => r,
                        Err(e) => {
                            rows.push(ctx.note("mc_dominance", p, &e));
                            continue;
                        }
                    };
                    for (i, t) in rep.t_grid.iter().enumerate() {
                        let (s, d, se) = (rep.survival_sum[i], rep.survival_direct[i], rep.stderr[i]);
                        let id = format!("mc_dominance[t={t}]");
                        rows.push(ReportRow::with_margin(
                            id,
                            p,
                            s,
                            d,
                            s - d + DOMINANCE_SIGMAS * se,
                            se,
                            atol,
                        ));
                    }
                    let (diff, se) = rep.consequence();
                    let lhs = rep.mean_exp_x.0 * rep.mean_exp_y.0;
                    rows.push(ReportRow::with_margin(
                        "mc_consequence",
                        p,
                        lhs,
                        rep.mean_exp_xy.0,
                        diff + MC_Z * se,
                        se,
                        atol,
                    ));
                }
            }
        }
    }
    Ok(rows)
}

fn execute(cli: &Cli, ctx: &mut Ctx) -> Result<Vec<ReportRow>> {
    match &cli.command {
        Command::Eval(a) => run_eval(a, ctx),
        Command::Verify(a) => run_verify(a, ctx),
        Command::Scan(a) => run_scan(a, ctx),
        Command::Mc(a) => run_mc(a, ctx),
    }
}

/// Runs the CLI on `args` (including the program name), writing the report to
/// `stdout` or `--out` and diagnostics to `stderr`. Returns the exit code.
pub fn run_with_io<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    if !(cli.atol > 0.0) {
        let _ = writeln!(stderr, "error: --atol must be > 0");
        return 2;
    }
    let mut spec = QuadratureSpec::from_env();
    if let Some(tol) = cli.quad_tol {
        if !(tol > 0.0) || !tol.is_finite() {
            let _ = writeln!(stderr, "error: --quad-tol must be a positive number");
            return 2;
        }
        spec.abs_tol = tol;
    }
    let mut ctx = Ctx {
        atol: cli.atol,
        spec,
        quad_tol_given: cli.quad_tol.is_some(),
        seed: cli.seed,
        diag: Vec::new(),
    };
    let result = match cli.jobs {
        Some(0) => {
            let _ = writeln!(stderr, "error: --jobs must be >= 1");
            return 2;
        }
        Some(jobs) => match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(|| execute(&cli, &mut ctx)),
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot start worker pool: {e}");
                return 2;
            }
        },
        None => execute(&cli, &mut ctx),
    };
    for line in &ctx.diag {
        let _ = writeln!(stderr, "{line}");
    }
    let rows = match result {
        Ok(rows) => rows,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 2;
        }
    };
    let written = match &cli.out {
        Some(path) => File::create(path).and_then(|f| write_rows(BufWriter::new(f), cli.format, &rows)),
        None => write_rows(&mut *stdout, cli.format, &rows),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write report: {e}");
        return 2;
    }
    exit_code(&rows)
}

/// Runs the CLI against the process stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with_io(args, &mut stdout.lock(), &mut stderr.lock())
}
