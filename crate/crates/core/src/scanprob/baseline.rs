//! Classical distribution functions that double as oracles.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::exactnum::{binom_int, floor_i64, int, pow_int, sign, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Baseline {
    /// Sample range `X_(N) − X_(1) ≤ w`, i.e. `P(N; N, w)`.
    RangeLinear,
    /// All points inside some arc of length `w`, i.e. `P_c(N; N, w)`.
    ArcContainment,
    /// Smallest linear spacing `≤ w`, i.e. `P(2; N, w)`.
    MinGapLinear,
    /// Smallest circular spacing `≤ w`, i.e. `P_c(2; N, w)`.
    MinGapCircular,
}

impl Baseline {
    pub const ALL: [Baseline; 4] = [
        Self::RangeLinear,
        Self::ArcContainment,
        Self::MinGapLinear,
        Self::MinGapCircular,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Self::RangeLinear => "range_linear",
            Self::ArcContainment => "arc_containment",
            Self::MinGapLinear => "min_gap_linear",
            Self::MinGapCircular => "min_gap_circular",
        }
    }

    /// `(k, circular)` of the scan statistic this law is the distribution of.
    pub fn scan_window(self, n: i64) -> (i64, bool) {
        match self {
            Self::RangeLinear => (n, false),
            Self::ArcContainment => (n, true),
            Self::MinGapLinear => (2, false),
            Self::MinGapCircular => (2, true),
        }
    }
}

impl fmt::Display for Baseline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Baseline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|b| b.label() == s)
            .ok_or_else(|| Error::UnknownName(format!("unknown baseline {s:?}")))
    }
}

fn positive_part(v: Rational) -> Rational {
    if v < Rational::zero() {
        Rational::zero()
    } else {
        v
    }
}

/// Value of `which` for `N` points at width `w`.
pub fn baseline_cdf(which: Baseline, n: i64, w: &Rational) -> Result<Rational> {
    if n < 2 {
        return Err(domain(format!("baselines need N >= 2, got {n}")));
    }
    if w < &Rational::zero() || w > &Rational::one() {
        return Err(domain(format!("w must lie in [0, 1], got {w}")));
    }
    let one = Rational::one();
    Ok(match which {
        Baseline::RangeLinear => int(n) * pow_int(w, n - 1)? - int(n - 1) * pow_int(w, n)?,
        Baseline::ArcContainment => {
            if w.is_one() {
                return Ok(one);
            }
            // some circular spacing ≥ 1−w; the k = 1 term alone is N·w^{N−1}
            let gap = &one - w;
            let mut all_short = Rational::zero();
            for k in 0..=floor_i64(&gap.recip()).min(n) {
                let base = positive_part(&one - int(k) * &gap);
                let term = Rational::from_integer(binom_int(n, k)) * pow_int(&base, n - 1)?;
                all_short += term * int(sign(k));
            }
            one - all_short
        }
        Baseline::MinGapLinear => one - pow_int(&positive_part(Rational::one() - int(n - 1) * w), n)?,
        Baseline::MinGapCircular => one - pow_int(&positive_part(Rational::one() - int(n) * w), n - 1)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn documented_values() {
        assert_eq!(baseline_cdf(Baseline::RangeLinear, 3, &rat(1, 2)).unwrap(), rat(1, 2));
        assert_eq!(baseline_cdf(Baseline::MinGapCircular, 3, &rat(1, 6)).unwrap(), rat(3, 4));
        assert_eq!(baseline_cdf(Baseline::ArcContainment, 3, &rat(1, 5)).unwrap(), rat(3, 25));
    }

    #[test]
    fn arc_containment_reduces_below_half() {
        for n in 2..8 {
            for j in 1..=10 {
                let w = rat(j, 20);
                let want = int(n) * pow_int(&w, n - 1).unwrap();
                assert_eq!(baseline_cdf(Baseline::ArcContainment, n, &w).unwrap(), want);
            }
        }
    }

    #[test]
    fn arc_containment_of_two_points_is_certain_past_half() {
        // two points always fit in an arc of length 1/2 or more
        assert_eq!(baseline_cdf(Baseline::ArcContainment, 2, &rat(3, 5)).unwrap(), int(1));
    }

    #[test]
    fn endpoints() {
        for b in Baseline::ALL {
            assert_eq!(baseline_cdf(b, 4, &int(0)).unwrap(), int(0), "{b}");
            assert_eq!(baseline_cdf(b, 4, &int(1)).unwrap(), int(1), "{b}");
        }
    }

    #[test]
    fn parse_round_trip() {
        for b in Baseline::ALL {
            assert_eq!(b.label().parse::<Baseline>().unwrap(), b);
        }
    }
}
