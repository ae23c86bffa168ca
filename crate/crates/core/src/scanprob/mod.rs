//! Distribution functions of three scan statistics of `N` uniform points.
//!
//! * [`StatKind::PcNm1`]: `P_c(N−1; N, w)`, circular, `k = N−1`.
//! * [`StatKind::Pc3`]: `P_c(3; N, w)`, circular, `k = 3`.
//! * [`StatKind::P3`]: `P(3; N, w)`, linear, `k = 3`.
//!
//! Each is a finite alternating sum below a saturation threshold and
//! identically one above it. [`evaluate`] runs the sum exactly or in `f64`;
//! [`measure_to_probability`] reaches the same numbers by normalizing the
//! underlying measures, and [`baseline_cdf`] supplies classical small-`N`
//! laws to compare against.

mod baseline;
mod checks;
mod formulas;
mod table;

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use baseline::{baseline_cdf, Baseline};
pub use checks::{
    circular_dominates_check, cross_check, float_consistency_check, monotone_in_n_check, monotone_in_w_check,
    overlap_check, pathway_check, piece_boundary_check, range_check, rational_grid, saturation_check,
    small_n_identity_checks, CrossCheckConfig,
};
pub use formulas::{default_upper, pc_nm1_leading_term, raw_survival, Survival};
pub use table::{tabulate, TableRow, FLOAT_REL_TOL, FLOAT_REL_FLOOR};

use crate::error::{domain, Error, Result};
use crate::exactnum::{int, Rational, Scalar};
use crate::measures::{a_closed, b_closed, c_closed, simplex_volume};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StatKind {
    #[serde(rename = "pc-nm1")]
    PcNm1,
    #[serde(rename = "pc-3")]
    Pc3,
    #[serde(rename = "p-3")]
    P3,
}

impl StatKind {
    pub const ALL: [StatKind; 3] = [Self::PcNm1, Self::Pc3, Self::P3];

    pub fn label(self) -> &'static str {
        match self {
            Self::PcNm1 => "pc-nm1",
            Self::Pc3 => "pc-3",
            Self::P3 => "p-3",
        }
    }

    /// Window size `k` at this `N`.
    pub fn k(self, n: i64) -> i64 {
        match self {
            Self::PcNm1 => n - 1,
            Self::Pc3 | Self::P3 => 3,
        }
    }

    pub fn circular(self) -> bool {
        !matches!(self, Self::P3)
    }

    /// Width from which the distribution function is identically one, or
    /// `None` when the formula is valid on all of `[0, 1)`.
    pub fn threshold(self, n: i64) -> Option<Rational> {
        match self {
            Self::PcNm1 => Some(Rational::one() - Rational::new(2.into(), n.into())),
            Self::Pc3 => Some(Rational::new(2.into(), n.into())),
            // 2/(N−2) ≥ 1 for N ≤ 4, where only w = 1 saturates
            Self::P3 if n >= 4 => Some(Rational::new(2.into(), (n - 2).into())),
            Self::P3 => None,
        }
    }
}

impl fmt::Display for StatKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for StatKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.label() == s)
            .ok_or_else(|| Error::UnknownName(format!("unknown statistic {s:?}; expected pc-nm1, pc-3 or p-3")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Regime {
    BelowThreshold,
    Saturated,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbValue<T> {
    pub p: T,
    pub survival: T,
    pub regime: Regime,
    pub active_terms: usize,
}

impl<T: Scalar> ProbValue<T> {
    fn saturated() -> Self {
        Self {
            p: T::scalar_one(),
            survival: T::scalar_zero(),
            regime: Regime::Saturated,
            active_terms: 0,
        }
    }

    fn from_survival(s: Survival<T>) -> Self {
        Self {
            p: T::scalar_one() - s.value.clone(),
            survival: s.value,
            regime: Regime::BelowThreshold,
            active_terms: s.active_terms,
        }
    }
}

/// One evaluation request.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanQuery {
    pub kind: StatKind,
    pub n: i64,
    pub w: Rational,
    pub mode: Mode,
}

fn validate(n: i64, w: &Rational) -> Result<()> {
    if n < 3 {
        return Err(domain(format!("N must be at least 3, got {n}")));
    }
    if w < &Rational::zero() || w > &Rational::one() {
        return Err(domain(format!("w must lie in [0, 1], got {w}")));
    }
    Ok(())
}

/// Whether `w` is at or beyond the saturation threshold of `kind`.
pub fn is_saturated(kind: StatKind, n: i64, w: &Rational) -> bool {
    w.is_one() || kind.threshold(n).is_some_and(|t| w >= &t)
}

/// Evaluates `kind` at `(N, w)` over `T`: [`Rational`] for exact results,
/// `f64` for the same sum in floating point.
pub fn evaluate<T: Scalar>(kind: StatKind, n: i64, w: &Rational) -> Result<ProbValue<T>> {
    validate(n, w)?;
    if w.is_zero() {
        return Ok(ProbValue {
            p: T::scalar_zero(),
            survival: T::scalar_one(),
            regime: Regime::BelowThreshold,
            active_terms: 0,
        });
    }
    if is_saturated(kind, n, w) {
        return Ok(ProbValue::saturated());
    }
    let upper = default_upper(kind, w)?;
    if kind == StatKind::PcNm1 {
        // the p = 0 summand is exactly one, so P is minus the tail
        let tail = formulas::pc_nm1_tail::<T>(n, w, upper)?;
        return Ok(ProbValue {
            p: -tail.value.clone(),
            survival: T::scalar_one() + tail.value,
            regime: Regime::BelowThreshold,
            active_terms: tail.active_terms + 1,
        });
    }
    Ok(ProbValue::from_survival(raw_survival(kind, n, w, upper)?))
}

pub fn pc_nm1(n: i64, w: &Rational) -> Result<ProbValue<Rational>> {
    evaluate(StatKind::PcNm1, n, w)
}

pub fn pc_3(n: i64, w: &Rational) -> Result<ProbValue<Rational>> {
    evaluate(StatKind::Pc3, n, w)
}

pub fn p_lin_3(n: i64, w: &Rational) -> Result<ProbValue<Rational>> {
    evaluate(StatKind::P3, n, w)
}

/// Reaches `kind` at `(N, w)` through the measures instead of the closed
/// sum: the survival is the measure divided by the unconstrained simplex
/// volume at the mapped abscissa.
///
/// | kind   | measure       | abscissa           |
/// |--------|---------------|--------------------|
/// | pc-nm1 | `a_N`         | `2/(1−w) − N`      |
/// | pc-3   | `b_N`         | `2/w − N`          |
/// | p-3    | `c_N` (N+1 gaps) | `2/w − N − 1`   |
///
/// Needs `0 < w` strictly below the threshold.
pub fn measure_to_probability(kind: StatKind, n: i64, w: &Rational) -> Result<ProbValue<Rational>> {
    validate(n, w)?;
    if w.is_zero() || is_saturated(kind, n, w) {
        return Err(domain(format!("w = {w} is outside the open regime of {kind} at N = {n}")));
    }
    let two = int(2);
    let (measure, volume) = match kind {
        StatKind::PcNm1 => {
            let x = &two / (Rational::one() - w) - int(n);
            (a_closed(n, &x)?, simplex_volume(n, &x)?)
        }
        StatKind::Pc3 => {
            let x = &two / w - int(n);
            (b_closed(n, &x)?, simplex_volume(n, &x)?)
        }
        StatKind::P3 => {
            let x = &two / w - int(n + 1);
            (c_closed(n, &x)?, simplex_volume(n + 1, &x)?)
        }
    };
    if volume.is_zero() {
        return Err(domain("unconstrained volume vanishes at this width"));
    }
    let survival = measure / volume;
    Ok(ProbValue {
        p: Rational::one() - &survival,
        active_terms: usize::from(!survival.is_zero()),
        survival,
        regime: Regime::BelowThreshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn documented_values() {
        assert_eq!(pc_nm1(3, &rat(1, 6)).unwrap().p, rat(3, 4));
        let sat = pc_nm1(5, &rat(7, 10)).unwrap();
        assert_eq!((sat.p, sat.regime), (int(1), Regime::Saturated));
        assert_eq!(pc_nm1(4, &rat(1, 4)).unwrap().p, rat(1, 2));
        assert_eq!(pc_3(3, &rat(1, 5)).unwrap().p, rat(3, 25));
        assert_eq!(pc_3(4, &rat(1, 4)).unwrap().p, rat(1, 2));
        assert_eq!(pc_3(10, &rat(1, 5)).unwrap().regime, Regime::Saturated);
        assert_eq!(p_lin_3(3, &rat(1, 2)).unwrap().p, rat(1, 2));
        assert_eq!(p_lin_3(3, &rat(3, 5)).unwrap().p, rat(81, 125));
        assert_eq!(p_lin_3(6, &rat(1, 2)).unwrap().p, int(1));
    }

    #[test]
    fn endpoints() {
        for kind in StatKind::ALL {
            for n in 3..8 {
                assert_eq!(evaluate::<Rational>(kind, n, &int(0)).unwrap().p, int(0));
                assert_eq!(evaluate::<Rational>(kind, n, &int(1)).unwrap().p, int(1));
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(pc_3(2, &rat(1, 4)).is_err());
        assert!(pc_3(5, &rat(-1, 4)).is_err());
        assert!(p_lin_3(5, &rat(5, 4)).is_err());
        assert!(measure_to_probability(StatKind::Pc3, 10, &rat(1, 5)).is_err());
        assert!("pc-4".parse::<StatKind>().is_err());
        assert_eq!("p-3".parse::<StatKind>().unwrap(), StatKind::P3);
    }

    #[test]
    fn survival_is_complement() {
        let v = p_lin_3(7, &rat(1, 7)).unwrap();
        assert_eq!(&v.p + &v.survival, int(1));
        assert!(v.active_terms > 0);
    }

    #[test]
    fn pathway_examples() {
        assert_eq!(measure_to_probability(StatKind::PcNm1, 3, &rat(1, 6)).unwrap().p, rat(3, 4));
        assert_eq!(measure_to_probability(StatKind::Pc3, 4, &rat(1, 4)).unwrap().p, rat(1, 2));
        assert_eq!(measure_to_probability(StatKind::P3, 3, &rat(1, 2)).unwrap().p, rat(1, 2));
    }

    #[test]
    fn float_tracks_exact() {
        let e = pc_3(9, &rat(2, 17)).unwrap().p;
        let f = evaluate::<f64>(StatKind::Pc3, 9, &rat(2, 17)).unwrap().p;
        assert!((f - crate::exactnum::to_f64(&e)).abs() < 1e-12);
    }
}
