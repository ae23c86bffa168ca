//! Coefficient extraction `[t^n] (tC)^p (a + b·z)^q` by Lagrange inversion.
//!
//! With `u = t²`, the shifted Catalan function `C(u) − 1` has compositional
//! inverse `u/(1+u)²`, which turns the extraction into
//! `[u^{(n−p)/2}] (1+u)^{n−q−1} ((a−b)u + (a+b))^q (1−u)`.
//! In every summation term of the measure expansions `n − q − 1` is 0 or 1,
//! so the right side is a short polynomial.

use num_traits::Zero;

use super::catalan::catalan_params;
use super::series::TruncSeries;
use crate::error::{domain, Result};
use crate::exactnum::{binom_general, int, Rational};

fn half_index(p: i64, n: i64) -> Option<usize> {
    let d = n - p;
    (d >= 0 && d % 2 == 0).then_some((d / 2) as usize)
}

/// `(head + slope·u)^q` through `u^m`, any integer `q`.
fn linear_power(head: &Rational, slope: &Rational, q: i64, m: usize) -> Result<Vec<Rational>> {
    let mut out = vec![Rational::zero(); m + 1];
    if q >= 0 {
        for (j, slot) in out.iter_mut().enumerate().take((q as usize).min(m) + 1) {
            let bin = Rational::from_integer(binom_general(q, j as u64));
            *slot = bin * num_traits::pow(slope.clone(), j) * num_traits::pow(head.clone(), q as usize - j);
        }
        return Ok(out);
    }
    if head.is_zero() {
        return Err(domain("negative power of a series with zero constant term"));
    }
    let lead = num_traits::pow(head.recip(), q.unsigned_abs() as usize);
    let ratio = slope / head;
    for (j, slot) in out.iter_mut().enumerate() {
        *slot = &lead * Rational::from_integer(binom_general(q, j as u64)) * num_traits::pow(ratio.clone(), j);
    }
    Ok(out)
}

/// Evaluates the `u`-domain side of the inversion identity.
pub fn lagrange_extract(p: i64, q: i64, a: &Rational, b: &Rational, n: i64) -> Result<Rational> {
    if n < 0 {
        return Err(domain(format!("extraction index n = {n} is negative")));
    }
    let Some(m) = half_index(p, n) else {
        return Ok(Rational::zero());
    };
    let e = n - q - 1;
    let binom_part: Vec<Rational> = (0..=m)
        .map(|j| Rational::from_integer(binom_general(e, j as u64)))
        .collect();
    let linear_part = linear_power(&(a + b), &(a - b), q, m)?;
    // T = (1+u)^e · L(u)^q, answer = T_m − T_{m−1}
    let t_coef = |k: usize| -> Rational {
        (0..=k).map(|j| &binom_part[j] * &linear_part[k - j]).sum()
    };
    let mut out = t_coef(m);
    if m > 0 {
        out -= t_coef(m - 1);
    }
    Ok(out)
}

/// The same coefficient computed directly from the truncated series.
pub fn direct_extract(p: i64, q: i64, a: &Rational, b: &Rational, n: i64) -> Result<Rational> {
    if n < 0 {
        return Err(domain(format!("extraction index n = {n} is negative")));
    }
    let d = n - p;
    if d < 0 {
        return Ok(Rational::zero());
    }
    let order = d as usize;
    let params = catalan_params(order);
    let c_pow = if p >= 0 {
        params.c.pow(p as u32)
    } else {
        params.c.inverse()?.pow(p.unsigned_abs() as u32)
    };
    let linear = TruncSeries::constant(a.clone(), order).add(&params.z.scale(b));
    let lin_pow = if q >= 0 {
        linear.pow(q as u32)
    } else {
        linear.inverse()?.pow(q.unsigned_abs() as u32)
    };
    Ok(c_pow.mul(&lin_pow).coef(order).clone())
}

/// One `[t^n](tC)^p(a + b·z)^q` extraction arising in a measure expansion.
#[derive(Clone, Debug, PartialEq)]
pub struct Extraction {
    pub family: &'static str,
    pub n: i64,
    pub p: i64,
    pub q: i64,
    pub a: Rational,
    pub b: Rational,
}

impl Extraction {
    /// Exponent of `(1+u)` on the `u`-domain side.
    pub fn binomial_exponent(&self) -> i64 {
        self.n - self.q - 1
    }

    pub fn lagrange(&self) -> Result<Rational> {
        lagrange_extract(self.p, self.q, &self.a, &self.b, self.n)
    }

    pub fn direct(&self) -> Result<Rational> {
        direct_extract(self.p, self.q, &self.a, &self.b, self.n)
    }
}

/// The summation-term extractions of the `a_n`, `b_n` and `c_n` expansions at `x`.
pub fn sum_term_extractions(n: i64, x: &Rational) -> Vec<Extraction> {
    let mut out = Vec::new();
    for i in 1..=n {
        out.push(Extraction {
            family: "a_n",
            n,
            p: i,
            q: n - 1,
            a: x.clone(),
            b: int(i),
        });
    }
    for i in 1..=n / 3 {
        out.push(Extraction {
            family: "b_n",
            n,
            p: 3 * i,
            q: n - 1,
            a: x.clone(),
            b: int(-i),
        });
    }
    let x3 = x + int(3);
    for i in 0..=(n + 2) / 3 + 1 {
        if 3 * i - 1 <= n + 1 {
            out.push(Extraction {
                family: "c_n/linear",
                n: n + 1,
                p: 3 * i - 1,
                q: n,
                a: x3.clone(),
                b: int(-i),
            });
        }
        if 3 * i <= n + 2 {
            out.push(Extraction {
                family: "c_n/quadratic",
                n: n + 2,
                p: 3 * i,
                q: n,
                a: x3.clone(),
                b: int(-i),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        // [t³](tC) = 1
        assert_eq!(lagrange_extract(1, 0, &int(1), &int(0), 3).unwrap(), int(1));
        // [t²] z = −2
        assert_eq!(lagrange_extract(0, 1, &int(0), &int(1), 2).unwrap(), int(-2));
        // [t²] (tC)² = 1
        assert_eq!(lagrange_extract(2, 0, &int(1), &int(0), 2).unwrap(), int(1));
        // parity mismatch → 0
        assert_eq!(lagrange_extract(1, 0, &int(1), &int(0), 2).unwrap(), int(0));
        assert_eq!(direct_extract(1, 0, &int(1), &int(0), 3).unwrap(), int(1));
        assert_eq!(direct_extract(0, 1, &int(0), &int(1), 2).unwrap(), int(-2));
    }

    #[test]
    fn summation_terms_have_exponent_zero_or_one() {
        for n in 1..=10 {
            for x in [rat(-3, 2), int(0), rat(7, 3)] {
                for e in sum_term_extractions(n, &x) {
                    assert!(matches!(e.binomial_exponent(), 0 | 1), "{e:?}");
                    assert_eq!(e.lagrange().unwrap(), e.direct().unwrap(), "{e:?}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn agrees_with_direct_series(p in -1i64..8, q in -3i64..6, an in -4i64..5, ad in 1i64..4,
                                     bn in -4i64..5, n in 0i64..=12) {
            let a = rat(an, ad);
            let b = int(bn);
            prop_assume!(q >= 0 || !(&a + &b).is_zero());
            prop_assert_eq!(lagrange_extract(p, q, &a, &b, n).unwrap(), direct_extract(p, q, &a, &b, n).unwrap());
        }
    }
}
