//! Adaptive Gauss–Kronrod (10/21 point) quadrature with global bisection of
//! the interval carrying the largest error estimate.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::EvalResult;

/// Change of variables applied before integrating.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Substitution {
    /// Integrate in the original variable.
    None,
    /// u = t^α, which turns a t^(α−1) endpoint factor into a constant.
    PowerAlpha,
    /// t = 1/u, mapping [a, ∞) onto (0, 1/a].
    Inverse,
}

/// Integration controls shared by every integral in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_refinements: usize,
    pub substitution: Substitution,
}

/// Environment variable overriding the default absolute tolerance.
pub const QUAD_TOL_ENV: &str = "MLINEQ_QUAD_TOL";

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-12,
            max_refinements: 4000,
            substitution: Substitution::PowerAlpha,
        }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_refinements: usize) -> Result<Self> {
        let spec = Self {
            abs_tol,
            rel_tol,
            max_refinements,
            ..Self::default()
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Defaults, with `abs_tol` taken from `MLINEQ_QUAD_TOL` when it is set
    /// to a positive number.
    pub fn from_env() -> Self {
        let mut spec = Self::default();
        if let Some(tol) = std::env::var(QUAD_TOL_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<f64>().ok())
            .filter(|t| *t > 0.0 && t.is_finite())
        {
            spec.abs_tol = tol;
        }
        spec
    }

    pub fn with_substitution(mut self, substitution: Substitution) -> Self {
        self.substitution = substitution;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol >= 0.0) {
            return domain("quadrature tolerances must be positive");
        }
        if self.max_refinements < 1 {
            return domain("max_refinements must be at least 1");
        }
        Ok(())
    }
}

// Kronrod abscissae (positive half, descending); odd indices are the Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_980_202_460,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    resabs: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resk = fc * WGK[10];
    let mut resg = 0.0;
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let reskh = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - reskh).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let value = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut error = ((resk - resg) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    Segment {
        a,
        b,
        value,
        error,
        resabs,
    }
}

// Every segment error is floored at 50·eps·resabs, so the summed floor gets
// a little headroom here or it can never be met exactly.
fn target(spec: &QuadratureSpec, total: f64, resabs_total: f64) -> f64 {
    spec.abs_tol
        .max(spec.rel_tol * total.abs())
        .max(64.0 * f64::EPSILON * resabs_total)
}

fn resum(heap: &BinaryHeap<Segment>, frozen_err: f64) -> (f64, f64, f64) {
    let mut total = 0.0;
    let mut err = frozen_err;
    let mut resabs = 0.0;
    for s in heap.iter() {
        total += s.value;
        err += s.error;
        resabs += s.resabs;
    }
    (total, err, resabs)
}

/// Integrate `f` over the finite interval [a, b].
///
/// Converges when the summed error estimate drops below
/// max(abs_tol, rel_tol·|I|) or the rounding floor of the rule.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<EvalResult> {
    spec.validate()?;
    if !a.is_finite() || !b.is_finite() {
        return domain("integrate needs finite limits; use Substitution::Inverse for tails");
    }
    if a == b {
        return Ok(EvalResult::new(0.0, 0.0, 1));
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };

    let first = gauss_kronrod(&f, lo, hi);
    let mut evals = 21;
    let mut total = first.value;
    let mut total_err = first.error;
    let mut resabs_total = first.resabs;
    let mut heap = BinaryHeap::new();
    // segments too narrow to split further
    let mut frozen_err = 0.0;
    heap.push(first);
    let mut refinements = 0;

    loop {
        if !total.is_finite() || !total_err.is_finite() {
            return Err(Error::Quadrature {
                estimate: total,
                error: total_err,
                refinements,
            });
        }
        if total_err <= target(spec, total, resabs_total) {
            break;
        }
        if refinements >= spec.max_refinements {
            (total, total_err, resabs_total) = resum(&heap, frozen_err);
            if total_err <= target(spec, total, resabs_total) {
                break;
            }
            return Err(Error::Quadrature {
                estimate: sign * total,
                error: total_err,
                refinements,
            });
        }
        let Some(worst) = heap.pop() else {
            // everything is frozen at floating-point resolution
            break;
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            frozen_err += worst.error;
            continue;
        }
        let left = gauss_kronrod(&f, worst.a, mid);
        let right = gauss_kronrod(&f, mid, worst.b);
        evals += 42;
        refinements += 1;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        resabs_total += left.resabs + right.resabs - worst.resabs;
        heap.push(left);
        heap.push(right);
        // rebuild the running sums now and then to shed drift
        if refinements % 64 == 0 {
            (total, total_err, resabs_total) = resum(&heap, frozen_err);
        }
    }
    let total = heap.iter().map(|s| s.value).sum::<f64>();
    let total_err = (heap.iter().map(|s| s.error).sum::<f64>() + frozen_err).max(0.0);
    Ok(EvalResult::new(sign * total, total_err, evals))
}

/// Integrate over [a, b] after the change of variables `substitution`.
///
/// `alpha` is the exponent used by [`Substitution::PowerAlpha`]; `b` may be
/// `f64::INFINITY` only with [`Substitution::Inverse`].
pub fn integrate_substituted<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    substitution: Substitution,
    alpha: f64,
    spec: &QuadratureSpec,
) -> Result<EvalResult> {
    match substitution {
        Substitution::None => integrate(f, a, b, spec),
        Substitution::PowerAlpha => {
            if !(alpha > 0.0) || a < 0.0 || b < 0.0 {
                return domain("power substitution needs alpha > 0 and a nonnegative range");
            }
            let inv = 1.0 / alpha;
            integrate(
                |u: f64| f(u.powf(inv)) * u.powf(inv - 1.0) * inv,
                a.powf(alpha),
                b.powf(alpha),
                spec,
            )
        }
        Substitution::Inverse => {
            if !(a > 0.0) || b != f64::INFINITY {
                return domain("inverse substitution needs a range [a, inf) with a > 0");
            }
            integrate(
                |u: f64| {
                    if u == 0.0 {
                        0.0
                    } else {
                        f(1.0 / u) / (u * u)
                    }
                },
                0.0,
                1.0 / a,
                spec,
            )
        }
    }
}
