//! Symbolic verification suites for the transform-domain derivation.

use super::catalan::CatalanParams;
use super::lagrange::sum_term_extractions;
use super::series::TruncSeries;
use super::transform::{a_tilde, b_tilde, c_tilde, FTildeTable, TransformSeries};
use crate::error::{domain, Result};
use crate::exactnum::{int, rat, Rational};
use crate::exppoly::ExpPoly;
use crate::report::{Check, SuiteReport};

/// `∂F/∂s − t·e^s·F² − t·e^{−s}`, which vanishes for the Riccati solution.
pub fn riccati_residual(f: &TruncSeries<ExpPoly>) -> TruncSeries<ExpPoly> {
    let order = f.order();
    let quadratic = f.mul(f).shift_up(1).mul_coef(&ExpPoly::exp(1));
    let forcing = TruncSeries::monomial(ExpPoly::exp(-1), 1, order);
    f.diff_s().sub(&quadratic).sub(&forcing)
}

/// Checks a candidate `F` against the Riccati equation and `F(t, 0) = 1`.
pub fn check_riccati(f: &TruncSeries<ExpPoly>) -> Vec<Check> {
    let order = f.order();
    let zero = TruncSeries::zero(order);
    vec![
        Check::series_equal("riccati residual dF/ds - t e^s F^2 - t e^-s = 0", &riccati_residual(f), &zero),
        Check::series_equal("boundary F(t,0) = 1", &f.at_s_zero(), &TruncSeries::one(order)),
    ]
}

pub fn verify_riccati(order: usize) -> Result<SuiteReport> {
    let f = TransformSeries::build(order)?.f;
    let mut report = SuiteReport::new("riccati");
    for c in check_riccati(&f) {
        report.push(c);
    }
    Ok(report)
}

/// `f̃_n` from the integral recursion equals `[t^n]F` for `2 ≤ n ≤ n_max`.
pub fn verify_recursion(n_max: usize) -> Result<SuiteReport> {
    let f = TransformSeries::build(n_max)?.f;
    let mut table = FTildeTable::new();
    let mut report = SuiteReport::new("recursion-vs-riccati");
    for n in 0..=n_max {
        let rec = table.get(n);
        let closed = f.coef(n);
        let params = format!("n={n}");
        report.push(if rec == closed {
            Check::pass("recursive f~_n = [t^n] F", params)
        } else {
            Check::fail("recursive f~_n = [t^n] F", params, format!("residual {}", rec - closed))
        });
    }
    Ok(report)
}

fn catalan_checks(p: &CatalanParams) -> Vec<Check> {
    let order = p.order();
    let one = TruncSeries::one(order);
    let t = TruncSeries::t(order);
    let tc = p.t_c();
    let inv_c = p.c.inverse().expect("C(0) = 1");
    let mut out = vec![
        Check::series_equal("alpha1 + alpha2 = 1", &p.alpha1.add(&p.alpha2), &one),
        Check::series_equal(
            "alpha1 * alpha2 = t^2",
            &p.alpha1.mul(&p.alpha2),
            &TruncSeries::monomial(int(1), 2, order),
        ),
        Check::series_equal("z = 2/C - 1", &p.z, &inv_c.scale(&int(2)).sub(&one)),
        Check::series_equal("alpha1 = 1/C", &p.alpha1, &inv_c),
        Check::series_equal("alpha1 = 1 - t^2 C", &p.alpha1, &one.sub(&p.c.shift_up(2))),
        Check::series_equal("alpha2 = t^2 C", &p.alpha2, &p.c.shift_up(2)),
        Check::series_equal("alpha2 = 1 - 1/C", &p.alpha2, &one.sub(&inv_c)),
    ];
    let ratio = p.alpha2.div(&p.alpha1).expect("alpha1(0) = 1");
    out.push(Check::series_equal("alpha2/alpha1 = (tC)^2", &ratio, &tc.mul(&tc)));
    let shifted = p.alpha2.add(&t).div(&p.alpha1.add(&t)).expect("alpha1(0) = 1");
    out.push(Check::series_equal("(alpha2+t)/(alpha1+t) = tC", &shifted, &tc));
    out
}

/// Right side of the `Q/R` expansion: `z·Σ_i (tC)^{3i} e^{−z i s} − α1²`.
pub fn q_over_r_expansion(p: &CatalanParams) -> Result<TruncSeries<ExpPoly>> {
    let order = p.order();
    let tc3 = p.t_c().pow(3);
    let mut sum = TruncSeries::zero(order);
    let mut tc_pow = TruncSeries::one(order);
    for i in 0..=order / 3 {
        let rate = p.z.scale(&int(-(i as i64)));
        sum = sum.add(&tc_pow.lift().mul(&TruncSeries::exp_of_rate(&rate)?));
        tc_pow = tc_pow.mul(&tc3);
    }
    Ok(p.z.lift().mul(&sum).sub(&p.alpha1.mul(&p.alpha1).lift()))
}

pub fn verify_identities(order: usize) -> Result<SuiteReport> {
    if order < 2 {
        return Err(domain(format!("identity verification needs order >= 2, got {order}")));
    }
    let ts = TransformSeries::build(order)?;
    let p = &ts.params;
    let mut report = SuiteReport::new("identities");
    for c in catalan_checks(p) {
        report.push(c);
    }

    report.push(Check::series_equal("P = dQ/ds", &ts.p, &ts.q.diff_s()));
    report.push(Check::series_equal("Q(t,0) = -z", &ts.q.at_s_zero(), &p.z.neg()));
    report.push(Check::from_bool(
        "R(0,s) = -1",
        "t^0",
        ts.r.coef(0) == &ExpPoly::constant(int(-1)),
        format!("R(0,s) = {}", ts.r.coef(0)),
    ));

    let r_over_q = ts.r.div(&ts.q)?;
    let f_plus = ts.f.add(&TruncSeries::monomial(ExpPoly::exp(-1), 1, order));
    report.push(Check::series_equal("R/Q = F + t e^-s", &r_over_q, &f_plus));

    let lhs = ts.q.div(&ts.r)?.shift_up(3).mul_coef(&ExpPoly::exp(-1));
    report.push(Check::series_equal(
        "Q/R t^3 e^-s = z sum (tC)^3i e^-zis - alpha1^2",
        &lhs,
        &q_over_r_expansion(p)?,
    ));

    let a = ts.a_series()?;
    let forced = ts.f.shift_up(1).mul_coef(&ExpPoly::exp(1));
    report.push(Check::series_equal("dA/ds = t e^s F", &a.diff_s(), &forced));
    report.push(Check::from_bool("A(0,s) = 0", "t^0", a.coef(0).is_zero(), ""));

    // the n = 1 term is ∫_0^s e^p dp = e^s − 1; the a_n of interest start at n = 2
    let mut table = FTildeTable::new();
    for n in 1..=order {
        let via_recursion = table.get(n - 1).shift_exp(1).integrate_0_to_s();
        let via_series = a.coef(n);
        let params = format!("n={n}");
        let name = "a~_n/n = int_0^s e^p f~_(n-1)(p) dp";
        report.push(if &via_recursion == via_series {
            Check::pass(name, params)
        } else {
            Check::fail(name, params, format!("residual {}", &via_recursion - via_series))
        });
    }

    // direct transforms s^n·L{·} of the small measures
    let b = ts.b_series()?;
    let c = ts.c_series()?;
    let f2 = ExpPoly::from_terms([(int(1), 0, 2), (int(-2), 1, 0), (int(-1), 0, 0)]);
    let pairs: Vec<(&str, ExpPoly, ExpPoly)> = vec![
        ("a~_2 = transform of (x+2) on (-2,0)", a_tilde(2, &a), f2),
        (
            "b~_2 = transform of (x+2)H(x)",
            b_tilde(2, &b),
            ExpPoly::from_terms([(int(1), 0, 0), (int(2), 1, 0)]),
        ),
        ("c~_1 = transform of (x+2)H(x+2)", c_tilde(1, &c), ExpPoly::exp(2)),
        ("c~_2 = transform of (x+3)^2/2 H(x+3)", c_tilde(2, &c), ExpPoly::exp(3)),
    ];
    for (name, got, want) in pairs {
        let detail = format!("got {got}");
        report.push(Check::from_bool(name, "exact", got == want, if got == want { String::new() } else { detail }));
    }
    Ok(report)
}

/// Lagrange extraction against direct series for every summation term, plus
/// the claim that the `(1+u)` exponent is always 0 or 1.
pub fn verify_lagrange(n_max: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("lagrange");
    let xs: [Rational; 3] = [rat(-5, 2), rat(1, 3), int(2)];
    for n in 1..=n_max as i64 {
        for x in &xs {
            let mut exponent_ok = true;
            let mut mismatch = None;
            for e in sum_term_extractions(n, x) {
                exponent_ok &= matches!(e.binomial_exponent(), 0 | 1);
                let (l, d) = (e.lagrange()?, e.direct()?);
                if l != d && mismatch.is_none() {
                    mismatch = Some(format!("{} p={} q={}: lagrange {l} vs direct {d}", e.family, e.p, e.q));
                }
            }
            let params = format!("n={n} x={x}");
            report.push(Check::from_bool("(1+u) exponent n-q-1 in {0,1}", params.clone(), exponent_ok, ""));
            report.push(match mismatch {
                None => Check::pass("lagrange extraction = direct series", params),
                Some(d) => Check::fail("lagrange extraction = direct series", params, d),
            });
        }
    }
    Ok(report)
}

/// Everything above at one order.
pub fn verify_series(order: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("series");
    report.extend(verify_recursion(order)?);
    report.extend(verify_riccati(order)?);
    report.extend(verify_identities(order)?);
    report.extend(verify_lagrange(order)?);
    Ok(report)
}
