//! Invariant checks on the closed forms, shared by the cross-check suite,
//! the CLI and the tests.

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{baseline_cdf, default_upper, evaluate, is_saturated, measure_to_probability, raw_survival, tabulate};
use super::{Baseline, StatKind};
use crate::error::Result;
use crate::exactnum::{int, rat, Rational};
use crate::report::{Check, SuiteReport};

/// `points` widths `j/(points+1)`, strictly inside `(0, 1)`.
pub fn rational_grid(points: i64) -> Vec<Rational> {
    (1..=points).map(|j| rat(j, points + 1)).collect()
}

fn grid_params(ns: &[i64], ws: &[Rational]) -> String {
    let n_span = match (ns.first(), ns.last()) {
        (Some(a), Some(b)) => format!("N={a}..{b}"),
        _ => "N=none".to_string(),
    };
    format!("{n_span} points={}", ws.len())
}

/// Exact `P` on the grid, indexed `[n][w]`.
fn exact_grid(kind: StatKind, ns: &[i64], ws: &[Rational]) -> Result<Vec<Vec<Rational>>> {
    ns.par_iter()
        .map(|&n| ws.iter().map(|w| Ok(evaluate::<Rational>(kind, n, w)?.p)).collect())
        .collect()
}

fn first_failure(checks: impl IntoIterator<Item = Option<String>>) -> Option<String> {
    checks.into_iter().flatten().next()
}

fn equal_on<F, G>(name: &str, params: String, ws: &[Rational], lhs: F, rhs: G) -> Result<Check>
where
    F: Fn(&Rational) -> Result<Rational>,
    G: Fn(&Rational) -> Rational,
{
    for w in ws {
        let (l, r) = (lhs(w)?, rhs(w));
        if l != r {
            return Ok(Check::fail(name, params, format!("w={w}: {l} vs {r}")));
        }
    }
    Ok(Check::pass(name, params))
}

/// Exact identities of the three forms at `N = 3` and `N = 4`, against
/// closed polynomials and against the classical laws.
pub fn small_n_identity_checks() -> Result<Vec<Check>> {
    let one = Rational::one();
    let p = |kind, n, w: &Rational| -> Result<Rational> { Ok(evaluate::<Rational>(kind, n, w)?.p) };
    let ws = |v: &[(i64, i64)]| v.iter().map(|&(a, b)| rat(a, b)).collect::<Vec<_>>();
    let mut out = vec![
        equal_on(
            "P_c(2;3,w) = 1-(1-3w)^2",
            "w in {1/10,1/6,1/4,3/10}".into(),
            &ws(&[(1, 10), (1, 6), (1, 4), (3, 10)]),
            |w| p(StatKind::PcNm1, 3, w),
            |w| &one - (&one - int(3) * w) * (&one - int(3) * w),
        )?,
        equal_on(
            "P_c(3;3,w) = 3w^2",
            "w in {1/10,1/5,2/5}".into(),
            &ws(&[(1, 10), (1, 5), (2, 5)]),
            |w| p(StatKind::Pc3, 3, w),
            |w| int(3) * w * w,
        )?,
        equal_on(
            "P_c(3;3,w) = 1-(2-3w)^2",
            "w in {11/20,3/5}".into(),
            &ws(&[(11, 20), (3, 5)]),
            |w| p(StatKind::Pc3, 3, w),
            |w| &one - (int(2) - int(3) * w) * (int(2) - int(3) * w),
        )?,
        equal_on(
            "P(3;3,w) = 3w^2-2w^3",
            "w in {1/4,1/2,3/5,9/10}".into(),
            &ws(&[(1, 4), (1, 2), (3, 5), (9, 10)]),
            |w| p(StatKind::P3, 3, w),
            |w| int(3) * w * w - int(2) * w * w * w,
        )?,
    ];
    let grid = rational_grid(50);
    let baseline = |b: Baseline, n: i64| move |w: &Rational| baseline_cdf(b, n, w).expect("valid grid");
    out.push(equal_on(
        "pc-nm1 at N=3 = circular min-gap law",
        "grid 50".into(),
        &grid,
        |w| p(StatKind::PcNm1, 3, w),
        baseline(Baseline::MinGapCircular, 3),
    )?);
    out.push(equal_on(
        "pc-3 at N=3 = arc-containment law",
        "grid 50".into(),
        &grid,
        |w| p(StatKind::Pc3, 3, w),
        baseline(Baseline::ArcContainment, 3),
    )?);
    out.push(equal_on(
        "p-3 at N=3 = sample-range law",
        "grid 50".into(),
        &grid,
        |w| p(StatKind::P3, 3, w),
        baseline(Baseline::RangeLinear, 3),
    )?);
    Ok(out)
}

/// `pc_nm1(4, w) = pc_3(4, w)`, since `k = N − 1 = 3` at `N = 4`.
pub fn overlap_check(ws: &[Rational]) -> Result<Check> {
    equal_on(
        "pc-nm1(4,w) = pc-3(4,w)",
        format!("points={}", ws.len()),
        ws,
        |w| Ok(evaluate::<Rational>(StatKind::PcNm1, 4, w)?.p),
        |w| evaluate::<Rational>(StatKind::Pc3, 4, w).expect("valid grid").p,
    )
}

/// The raw sum evaluated exactly at the threshold width gives `P = 1`.
pub fn saturation_check(kind: StatKind, ns: &[i64]) -> Result<Check> {
    let name = format!("{kind} sum equals 1 at its threshold");
    let mut bad = None;
    for &n in ns {
        let Some(t) = kind.threshold(n) else { continue };
        let upper = default_upper(kind, &t)?;
        let s = raw_survival::<Rational>(kind, n, &t, upper)?.value;
        if !s.is_zero() && bad.is_none() {
            bad = Some(format!("N={n} w={t}: survival {s}"));
        }
    }
    Ok(match bad {
        None => Check::pass(name, format!("N in {ns:?}")),
        Some(d) => Check::fail(name, format!("N in {ns:?}"), d),
    })
}

pub fn range_check(kind: StatKind, ns: &[i64], ws: &[Rational]) -> Result<Check> {
    let vals = exact_grid(kind, ns, ws)?;
    let (zero, one) = (&Rational::zero(), &Rational::one());
    let bad = first_failure(ns.iter().zip(&vals).flat_map(|(n, row)| {
        row.iter()
            .zip(ws)
            .map(move |(p, w)| (p < zero || p > one).then(|| format!("N={n} w={w}: {p}")))
    }));
    Ok(verdict(format!("{kind} within [0,1]"), grid_params(ns, ws), bad))
}

pub fn monotone_in_w_check(kind: StatKind, ns: &[i64], ws: &[Rational]) -> Result<Check> {
    let vals = exact_grid(kind, ns, ws)?;
    let bad = first_failure(ns.iter().zip(&vals).flat_map(|(n, row)| {
        row.windows(2)
            .zip(ws.windows(2))
            .map(move |(p, w)| (p[1] < p[0]).then(|| format!("N={n}: P({}) = {} < P({}) = {}", w[1], p[1], w[0], p[0])))
    }));
    Ok(verdict(format!("{kind} nondecreasing in w"), grid_params(ns, ws), bad))
}

/// `k = 3` forms are nondecreasing in `N`: another point cannot widen the
/// smallest 3-point window. `P_c(N−1; N, w)` moves the other way because
/// `k` grows with `N`.
pub fn monotone_in_n_check(kind: StatKind, ns: &[i64], ws: &[Rational]) -> Result<Check> {
    let vals = exact_grid(kind, ns, ws)?;
    let increasing = kind != StatKind::PcNm1;
    let mut bad = None;
    'outer: for i in 1..ns.len() {
        for (j, w) in ws.iter().enumerate() {
            let (prev, next) = (&vals[i - 1][j], &vals[i][j]);
            let broken = if increasing { next < prev } else { next > prev };
            if broken {
                bad = Some(format!("w={w}: N={} gives {prev}, N={} gives {next}", ns[i - 1], ns[i]));
                break 'outer;
            }
        }
    }
    let dir = if increasing { "nondecreasing" } else { "nonincreasing" };
    Ok(verdict(format!("{kind} {dir} in N"), grid_params(ns, ws), bad))
}

/// `W_c(3) ≤ W(3)` pointwise, so `P_c(3) ≥ P(3)`.
pub fn circular_dominates_check(ns: &[i64], ws: &[Rational]) -> Result<Check> {
    let circ = exact_grid(StatKind::Pc3, ns, ws)?;
    let lin = exact_grid(StatKind::P3, ns, ws)?;
    let bad = first_failure(ns.iter().enumerate().flat_map(|(i, n)| {
        let (c, l) = (&circ[i], &lin[i]);
        ws.iter()
            .enumerate()
            .map(move |(j, w)| (c[j] < l[j]).then(|| format!("N={n} w={w}: {} < {}", c[j], l[j])))
    }));
    Ok(verdict("pc-3 >= p-3".to_string(), grid_params(ns, ws), bad))
}

/// At each width where the summation limit jumps, the pieces on either side
/// agree exactly. That is `w = 1/j` for the `k = 3` forms and
/// `w = 1 − 1/j` for `P_c(N−1)`.
pub fn piece_boundary_check(kind: StatKind, ns: &[i64], j_max: i64) -> Result<Check> {
    let mut bad = None;
    let mut tested = 0usize;
    for &n in ns {
        for j in 2..=j_max {
            let w = match kind {
                StatKind::PcNm1 => Rational::one() - rat(1, j),
                _ => rat(1, j),
            };
            if is_saturated(kind, n, &w) {
                continue;
            }
            let at = default_upper(kind, &w)?;
            let left = raw_survival::<Rational>(kind, n, &w, at)?.value;
            // the neighbouring piece stops one index earlier
            let other = at - 1;
            let right = raw_survival::<Rational>(kind, n, &w, other)?.value;
            tested += 1;
            if left != right && bad.is_none() {
                bad = Some(format!("N={n} w={w}: limit {at} gives {left}, limit {other} gives {right}"));
            }
        }
    }
    let params = format!("N={}..{} j=2..{j_max} boundaries={tested}", ns.first().unwrap_or(&0), ns.last().unwrap_or(&0));
    Ok(verdict(format!("{kind} continuous across piece boundaries"), params, bad))
}

/// `measure_to_probability` against the closed sum at every grid point in
/// the open regime; any discrepancy is reported with its values.
pub fn pathway_check(kind: StatKind, ns: &[i64], ws: &[Rational]) -> Result<Check> {
    let mut bad = None;
    let mut compared = 0usize;
    for &n in ns {
        for w in ws {
            if is_saturated(kind, n, w) {
                continue;
            }
            let via_measure = measure_to_probability(kind, n, w)?.p;
            let direct = evaluate::<Rational>(kind, n, w)?.p;
            compared += 1;
            if via_measure != direct && bad.is_none() {
                bad = Some(format!("N={n} w={w}: measure pathway {via_measure}, closed sum {direct}"));
            }
        }
    }
    let mut c = verdict(
        format!("{kind} measure pathway = closed sum"),
        format!("{} compared={compared}", grid_params(ns, ws)),
        bad,
    );
    if c.passed {
        c.detail = Some(format!("exact agreement at all {compared} points"));
    }
    Ok(c)
}

/// Float mode against exact mode wherever `P` exceeds the floor.
pub fn float_consistency_check(kind: StatKind, ns: &[i64], ws: &[Rational]) -> Result<Check> {
    let rows = tabulate(kind, ns, ws);
    if let Some(r) = rows.iter().find(|r| r.error.is_some()) {
        return Ok(Check::fail(
            format!("{kind} float = exact"),
            grid_params(ns, ws),
            format!("N={} w={}: {}", r.n, r.w, r.error.as_deref().unwrap_or("")),
        ));
    }
    let worst = rows
        .iter()
        .filter(|r| r.p_exact_value.is_some_and(|e| e > super::FLOAT_REL_FLOOR))
        .filter_map(|r| Some((r.relative_error()?, r)))
        .max_by(|a, b| a.0.total_cmp(&b.0));
    let bad = rows
        .iter()
        .find(|r| !r.agree)
        .map(|r| format!("N={} w={}: exact {:?} float {:?}", r.n, r.w, r.p_exact_value, r.p_float));
    let mut c = verdict(format!("{kind} float = exact"), grid_params(ns, ws), bad);
    if c.passed {
        if let Some((e, r)) = worst {
            c.detail = Some(format!("max relative error {e:.2e} at N={} w={}", r.n, r.w));
        }
    }
    Ok(c)
}

fn verdict(name: String, params: String, bad: Option<String>) -> Check {
    match bad {
        None => Check::pass(name, params),
        Some(d) => Check::fail(name, params, d),
    }
}

/// Settings for [`cross_check`].
#[derive(Clone, Copy, Debug)]
pub struct CrossCheckConfig {
    /// Largest `N` of the property sweeps.
    pub n_max: i64,
    /// Number of grid widths `j/(grid+1)`.
    pub grid: i64,
    /// Largest `N` of the measure-pathway comparison.
    pub pathway_n_max: i64,
    /// Number of widths in the pathway comparison.
    pub pathway_points: i64,
}

impl Default for CrossCheckConfig {
    fn default() -> Self {
        Self {
            n_max: 40,
            grid: 50,
            pathway_n_max: 12,
            pathway_points: 20,
        }
    }
}

/// Every invariant of the closed forms in one report.
pub fn cross_check(config: CrossCheckConfig) -> Result<SuiteReport> {
    let ns: Vec<i64> = (3..=config.n_max.max(3)).collect();
    let ws = rational_grid(config.grid);
    let path_ns: Vec<i64> = (3..=config.pathway_n_max.max(3)).collect();
    let path_ws = rational_grid(config.pathway_points);
    let sat_ns: Vec<i64> = (4..=config.n_max.clamp(4, 12)).collect();
    let overlap_ws: Vec<Rational> = (1..=20).map(|j| rat(j, 41)).collect();

    let mut report = SuiteReport::new("cross-check");
    for c in small_n_identity_checks()? {
        report.push(c);
    }
    report.push(overlap_check(&overlap_ws)?);
    report.push(leading_term_check(&path_ns)?);
    for kind in StatKind::ALL {
        report.push(saturation_check(kind, &sat_ns)?);
        report.push(range_check(kind, &ns, &ws)?);
        report.push(monotone_in_w_check(kind, &ns, &ws)?);
        report.push(monotone_in_n_check(kind, &ns, &ws)?);
        report.push(piece_boundary_check(kind, &ns, 2 * config.n_max)?);
        report.push(pathway_check(kind, &path_ns, &path_ws)?);
        report.push(float_consistency_check(kind, &ns, &ws)?);
    }
    report.push(circular_dominates_check(&ns, &ws)?);
    Ok(report)
}

/// The `p = 0` summand of `P_c(N−1)` is exactly one wherever the sum is used.
fn leading_term_check(ns: &[i64]) -> Result<Check> {
    let mut bad = None;
    for &n in ns {
        for w in rational_grid(20) {
            if is_saturated(StatKind::PcNm1, n, &w) {
                continue;
            }
            let t = super::pc_nm1_leading_term(n, &w)?;
            if !t.is_one() && bad.is_none() {
                bad = Some(format!("N={n} w={w}: {t}"));
            }
        }
    }
    Ok(verdict("pc-nm1 p=0 summand = 1".to_string(), format!("N in {ns:?}"), bad))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_open() {
        let g = rational_grid(4);
        assert_eq!(g, vec![rat(1, 5), rat(2, 5), rat(3, 5), rat(4, 5)]);
    }

    #[test]
    fn small_identities_hold() {
        for c in small_n_identity_checks().unwrap() {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn wrong_piece_is_detected() {
        // summing one term too few inside a piece changes the value
        let w = rat(2, 15);
        let n = 11;
        let at = default_upper(StatKind::Pc3, &w).unwrap();
        let full = raw_survival::<Rational>(StatKind::Pc3, n, &w, at).unwrap().value;
        let short = raw_survival::<Rational>(StatKind::Pc3, n, &w, at - 1).unwrap().value;
        assert_ne!(full, short);
    }

    #[test]
    fn small_cross_check_passes() {
        let r = cross_check(CrossCheckConfig {
            n_max: 10,
            grid: 12,
            pathway_n_max: 8,
            pathway_points: 10,
        })
        .unwrap();
        assert!(r.all_passed(), "{r}");
    }
}
