//! Lebesgue measures of the spacing constraint sets: exact closed forms and
//! the independent oracles used to check them.
//!
//! * [`a_closed`], [`b_closed`], [`c_closed`]: exact piecewise polynomials.
//! * [`density_oracle`]: Monte Carlo straight from the set definitions.
//! * [`ChainRecursion`]: numerical solution of the convolution recursion for
//!   the linear chain `f_n`, which also yields `a_n`.

mod closed;
mod oracle;
mod recursion;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

pub use closed::{a_closed, a_closed_side, b_closed, b_closed_side, c_closed, c_closed_side, simplex_volume, Side};
pub use oracle::{
    density_oracle, density_oracle_with, DensityEstimate, Estimator, MeasureKind, DEFAULT_BANDWIDTH,
    MIN_ORACLE_SAMPLES,
};
pub use recursion::{a_via_recursion, f_oracle, ChainRecursion, DEFAULT_RESOLUTION};

use crate::error::{domain, Result};
use crate::exactnum::{int, rat, to_f64, Rational};
use crate::report::{Check, SuiteReport};

/// z-score bound for closed form against oracle.
pub const ORACLE_SIGMAS: f64 = 4.0;

/// Points per measure in the oracle comparison.
pub const ORACLE_POINTS: i64 = 10;

/// Absolute tolerance for the recursion oracle at [`DEFAULT_RESOLUTION`].
pub const RECURSION_TOLERANCE: f64 = 1e-4;

/// Exact value of the index-`n` measure of `kind`; `FLinear` has no closed
/// form beyond `n = 2` and is rejected.
pub fn closed(kind: MeasureKind, n: i64, x: &Rational) -> Result<Rational> {
    closed_side(kind, n, x, Side::Right)
}

pub fn closed_side(kind: MeasureKind, n: i64, x: &Rational, side: Side) -> Result<Rational> {
    match kind {
        MeasureKind::ACyclic => a_closed_side(n, x, side),
        MeasureKind::BCyclicGe => b_closed_side(n, x, side),
        MeasureKind::CLinearGe => c_closed_side(n, x, side),
        MeasureKind::FLinear => Err(domain("no closed form for the linear chain f_n")),
    }
}

/// Interval outside which the measure vanishes, as `(lo, hi)`.
///
/// `a_n` needs every pair sum `≤ 2`, so `x ≤ 0`; an odd linear chain `f_n`
/// reaches `x = 1`; `b_n` needs every pair sum
/// `≥ 2`, so `x ≥ 0`; the interior chain of `c_n` forces
/// `x ≥ 2⌊(n−1)/2⌋ − n − 1`. Upper ends of `b` and `c` are unbounded and are
/// reported as `lo + n + 1`, a window wide enough to cross every knot.
pub fn support(kind: MeasureKind, n: i64) -> (Rational, Rational) {
    match kind {
        MeasureKind::FLinear => (int(-n), int(n % 2)),
        MeasureKind::ACyclic => (int(-n), int(0)),
        MeasureKind::BCyclicGe => (int(0), int(n)),
        MeasureKind::CLinearGe => {
            let lo = 2 * ((n - 1) / 2) - n - 1;
            (int(lo), int(lo + n + 1))
        }
    }
}

/// `ORACLE_POINTS` rational points strictly inside the support, offset from
/// the integer knots.
pub fn interior_points(kind: MeasureKind, n: i64) -> Vec<Rational> {
    let (lo, hi) = support(kind, n);
    let span = &hi - &lo;
    (0..ORACLE_POINTS)
        .map(|j| &lo + &span * rat(7 * j + 2, 70))
        .collect()
}

/// One closed-form-versus-oracle comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureRow {
    pub kind: MeasureKind,
    pub n: i64,
    pub x: String,
    pub closed: String,
    pub closed_value: f64,
    pub oracle: f64,
    pub std_error: f64,
    pub z: f64,
}

impl MeasureRow {
    pub fn passed(&self) -> bool {
        if self.std_error == 0.0 {
            return (self.oracle - self.closed_value).abs() <= 1e-12 * self.closed_value.abs().max(1.0);
        }
        self.z.abs() < ORACLE_SIGMAS
    }
}

/// Settings for [`verify_measures`].
#[derive(Clone, Copy, Debug)]
pub struct MeasureSuiteConfig {
    pub n_max: i64,
    pub samples: u64,
    pub seed: u64,
    /// Skip the recursion oracle, which dominates runtime at `n = 6`.
    pub recursion: bool,
}

impl Default for MeasureSuiteConfig {
    fn default() -> Self {
        Self {
            n_max: 5,
            samples: 1_000_000,
            seed: 42,
            recursion: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureSuite {
    pub report: SuiteReport,
    pub rows: Vec<MeasureRow>,
}

fn row_seed(seed: u64, kind: MeasureKind, n: i64, j: usize) -> u64 {
    let k = MeasureKind::ALL.iter().position(|m| *m == kind).unwrap_or(0) as u64;
    seed ^ (k << 48) ^ ((n as u64) << 32) ^ (j as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Compares the closed form against the density oracle at the interior points.
pub fn oracle_rows(kind: MeasureKind, n: i64, samples: u64, seed: u64) -> Result<Vec<MeasureRow>> {
    interior_points(kind, n)
        .into_iter()
        .enumerate()
        .map(|(j, x)| {
            let exact = closed(kind, n, &x)?;
            let closed_value = to_f64(&exact);
            let est = density_oracle(kind, n as usize, to_f64(&x), samples, row_seed(seed, kind, n, j))?;
            let z = if est.std_error > 0.0 {
                (est.value - closed_value) / est.std_error
            } else {
                0.0
            };
            Ok(MeasureRow {
                kind,
                n,
                x: x.to_string(),
                closed: exact.to_string(),
                closed_value,
                oracle: est.value,
                std_error: est.std_error,
                z,
            })
        })
        .collect()
}

/// Exact structural checks that need no sampling.
pub fn structural_checks(n_max: i64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (name, got, want) in [
        ("a_2(-1) = 1", a_closed(2, &int(-1))?, int(1)),
        ("a_2(1) = 0", a_closed(2, &int(1))?, int(0)),
        ("b_2(1) = 3", b_closed(2, &int(1))?, int(3)),
        ("b_2(-1/2) = 0", b_closed(2, &rat(-1, 2))?, int(0)),
    ] {
        out.push(Check::from_bool(name, "exact", got == want, format!("got {got}")));
    }

    let mut bad = None;
    for k in 1..40 {
        let x = rat(-k, 20);
        let got = a_closed(2, &x)?;
        if got != &x + int(2) && bad.is_none() {
            bad = Some(format!("x={x}: a_2 = {got}"));
        }
    }
    out.push(match bad {
        None => Check::pass("a_2 = f_2 = x+2 on (-2,0)", "x=k/20"),
        Some(d) => Check::fail("a_2 = f_2 = x+2 on (-2,0)", "x=k/20", d),
    });

    let kinds = [MeasureKind::ACyclic, MeasureKind::BCyclicGe, MeasureKind::CLinearGe];
    for kind in kinds {
        for n in 2..=n_max.max(6) {
            out.push(continuity_check(kind, n)?);
            out.push(nonnegativity_check(kind, n)?);
            out.push(support_check(kind, n)?);
        }
    }
    Ok(out)
}

/// Left limit equals point value at every integer knot, except where the
/// set itself jumps: at `n = 2` the constraint pins a whole slice at once.
fn continuity_check(kind: MeasureKind, n: i64) -> Result<Check> {
    let name = format!("{} continuous at integer knots", kind.label());
    let params = format!("n={n}");
    let mut jumps = Vec::new();
    for k in -n - 3..=n + 3 {
        let x = int(k);
        let left = closed_side(kind, n, &x, Side::Left)?;
        let right = closed(kind, n, &x)?;
        if left != right {
            jumps.push(format!("x={k}: {left} vs {right}"));
        }
    }
    let expected = expected_jumps(kind, n);
    Ok(if jumps == expected {
        Check::pass(name, params)
    } else {
        Check::fail(name, params, format!("jumps {jumps:?}, expected {expected:?}"))
    })
}

/// The only discontinuities: the two-variable sets switch on or off at the
/// point where the pair constraint holds with equality on the whole slice.
pub fn expected_jumps(kind: MeasureKind, n: i64) -> Vec<String> {
    match (kind, n) {
        (MeasureKind::ACyclic, 2) => vec!["x=0: 2 vs 0".to_string()],
        (MeasureKind::BCyclicGe, 2) => vec!["x=0: 0 vs 2".to_string()],
        _ => Vec::new(),
    }
}

fn scan_grid(kind: MeasureKind, n: i64) -> impl Iterator<Item = Rational> {
    let (lo, hi) = support(kind, n);
    let lo = lo - int(2);
    let hi = hi + int(2);
    let steps = 8 * (to_f64(&(&hi - &lo)) as i64);
    (0..=steps).map(move |j| &lo + (&hi - &lo) * rat(j, steps))
}

fn nonnegativity_check(kind: MeasureKind, n: i64) -> Result<Check> {
    let name = format!("{} nonnegative", kind.label());
    for x in scan_grid(kind, n) {
        let v = closed(kind, n, &x)?;
        if v < Rational::zero() {
            return Ok(Check::fail(name, format!("n={n}"), format!("x={x}: {v}")));
        }
    }
    Ok(Check::pass(name, format!("n={n}")))
}

fn support_check(kind: MeasureKind, n: i64) -> Result<Check> {
    let name = format!("{} vanishes outside its support", kind.label());
    let (lo, hi) = support(kind, n);
    for x in scan_grid(kind, n) {
        let outside = match kind {
            MeasureKind::ACyclic | MeasureKind::FLinear => x < lo || x > hi,
            _ => x < lo,
        };
        if outside {
            let v = closed(kind, n, &x)?;
            if !v.is_zero() {
                return Ok(Check::fail(name, format!("n={n}"), format!("x={x}: {v}")));
            }
        }
    }
    Ok(Check::pass(name, format!("n={n}")))
}

/// `a_n` from the convolution recursion against the closed form.
pub fn recursion_checks(n_max: i64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let f2 = ChainRecursion::new(2, DEFAULT_RESOLUTION)?;
    let err = (f2.f(-1.0) - 1.0).abs();
    out.push(Check::from_bool(
        "recursion f_2(-1) = 1",
        format!("tol={RECURSION_TOLERANCE}"),
        err < RECURSION_TOLERANCE,
        format!("error {err:.2e}"),
    ));
    for n in 3..=n_max.min(6) {
        let chain = ChainRecursion::new(n as usize, DEFAULT_RESOLUTION)?;
        let mut worst = (0.0f64, String::new());
        for x in interior_points(MeasureKind::ACyclic, n) {
            let e = (chain.a(to_f64(&x))? - to_f64(&a_closed(n, &x)?)).abs();
            if e > worst.0 {
                worst = (e, x.to_string());
            }
        }
        out.push(Check::from_bool(
            "recursion a_n = closed a_n",
            format!("n={n} tol={RECURSION_TOLERANCE}"),
            worst.0 < RECURSION_TOLERANCE,
            format!("max error {:.2e} at x={}", worst.0, worst.1),
        ));
    }
    Ok(out)
}

/// Closed forms against every oracle: exact anchors, continuity, sign and
/// support, the recursion, and Monte Carlo at interior points.
pub fn verify_measures(config: MeasureSuiteConfig) -> Result<MeasureSuite> {
    if config.n_max < 2 || config.n_max > 6 {
        return Err(domain(format!("measure suite needs 2 <= n_max <= 6, got {}", config.n_max)));
    }
    let mut report = SuiteReport::new("measures");
    for c in structural_checks(config.n_max)? {
        report.push(c);
    }
    if config.recursion {
        for c in recursion_checks(config.n_max)? {
            report.push(c);
        }
    }
    let mut rows = Vec::new();
    for kind in [MeasureKind::ACyclic, MeasureKind::BCyclicGe, MeasureKind::CLinearGe] {
        for n in kind.min_n() as i64..=config.n_max {
            let batch = oracle_rows(kind, n, config.samples, config.seed)?;
            let worst = batch.iter().map(|r| r.z.abs()).fold(0.0, f64::max);
            let failed: Vec<String> = batch.iter().filter(|r| !r.passed()).map(|r| r.x.clone()).collect();
            report.push(Check::from_bool(
                format!("{} closed form = density oracle", kind.label()),
                format!("n={n} points={} samples={}", batch.len(), config.samples),
                failed.is_empty(),
                if failed.is_empty() {
                    format!("max |z| {worst:.2}")
                } else {
                    format!("|z| >= {ORACLE_SIGMAS} at x in {failed:?}")
                },
            ));
            rows.extend(batch);
        }
    }
    Ok(MeasureSuite { report, rows })
}
