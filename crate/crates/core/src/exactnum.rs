//! Exact rational arithmetic and the extended binomial convention.
//!
//! [`Rational`] is an arbitrary-precision fraction kept in lowest terms with a
//! positive denominator. Every probability, window width and measure value in
//! this crate is ultimately computed in it; floating point only appears in
//! callers that explicitly ask for it through [`Scalar`].

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};

pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Ordinary binomial coefficient, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `C(n, m)` for integer `m`, zero outside `0 ..= n`.
pub fn binom_int(n: i64, m: i64) -> BigInt {
    if n < 0 || m < 0 || m > n {
        return BigInt::zero();
    }
    binomial(n as u64, m as u64)
}

/// Binomial coefficient with a rational lower index.
///
/// Returns `C(n, m)` when `m` is an integer in `0 ..= n` and zero when `m` is
/// negative, larger than `n`, or not an integer. Accepting a rational lets
/// call sites pass `N/2` directly and get zero for odd `N`.
pub fn binom_ext(n: i64, m: &Rational) -> Result<Rational> {
    if n < 0 {
        return Err(domain(format!("binom_ext: upper index {n} is negative")));
    }
    if !m.is_integer() {
        return Ok(Rational::zero());
    }
    let Some(m) = m.to_integer().to_i64() else {
        return Ok(Rational::zero());
    };
    Ok(Rational::from_integer(binom_int(n, m)))
}

/// Generalized binomial `C(r, k)` for integer `r` of either sign.
pub fn binom_general(r: i64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(r - i as i64);
    }
    let mut fact = BigInt::one();
    for i in 1..=k {
        fact *= BigInt::from(i);
    }
    acc / fact
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Exact integer power. `0^0 = 1`; zero to a negative power is an error.
pub fn pow_int(base: &Rational, e: i64) -> Result<Rational> {
    pow_int_in(base, e, "pow_int")
}

pub(crate) fn pow_int_in(base: &Rational, e: i64, context: &str) -> Result<Rational> {
    if e == 0 {
        return Ok(Rational::one());
    }
    if base.is_zero() {
        if e < 0 {
            return Err(Error::ZeroToNegativePower {
                exponent: e,
                context: context.to_string(),
            });
        }
        return Ok(Rational::zero());
    }
    let mag = e.unsigned_abs();
    let exp = u32::try_from(mag).map_err(|_| domain(format!("exponent {e} too large")))?;
    let numer = num_traits::pow(base.numer().clone(), exp as usize);
    let denom = num_traits::pow(base.denom().clone(), exp as usize);
    Ok(if e > 0 {
        Rational::new(numer, denom)
    } else {
        Rational::new(denom, numer)
    })
}

pub fn floor_i64(r: &Rational) -> i64 {
    r.floor().to_integer().to_i64().expect("floor fits in i64")
}

pub fn ceil_i64(r: &Rational) -> i64 {
    r.ceil().to_integer().to_i64().expect("ceil fits in i64")
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"p/q"`, an integer, or a finite decimal such as `"0.25"` exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let err = || Error::Parse(text.to_string());
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(p, q));
    }
    let (negative, body) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(err());
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{whole}{frac}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| err())?
    };
    let denom = num_traits::pow(BigInt::from(10u32), frac.len());
    let value = Rational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

/// Renders as `"p/q"`, or just `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Number type the closed-form evaluators run over: exact [`Rational`] or
/// `f64` evaluating the same term sequence.
pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_rational(r: &Rational) -> Self;
    fn from_bigint(i: &BigInt) -> Self;
    fn from_i64(i: i64) -> Self {
        Self::from_bigint(&BigInt::from(i))
    }
    fn scalar_zero() -> Self {
        Self::from_i64(0)
    }
    fn scalar_one() -> Self {
        Self::from_i64(1)
    }
    fn is_zero_value(&self) -> bool;
    fn as_f64(&self) -> f64;
    /// `self^e` with `0^0 = 1`; zero to a negative power is an error naming `context`.
    fn pow_checked(&self, e: i64, context: &str) -> Result<Self>;
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn from_bigint(i: &BigInt) -> Self {
        Rational::from_integer(i.clone())
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
    fn as_f64(&self) -> f64 {
        to_f64(self)
    }
    fn pow_checked(&self, e: i64, context: &str) -> Result<Self> {
        pow_int_in(self, e, context)
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        to_f64(r)
    }
    fn from_bigint(i: &BigInt) -> Self {
        i.to_f64().unwrap_or(f64::INFINITY)
    }
    fn from_i64(i: i64) -> Self {
        i as f64
    }
    fn is_zero_value(&self) -> bool {
        *self == 0.0
    }
    fn as_f64(&self) -> f64 {
        *self
    }
    fn pow_checked(&self, e: i64, context: &str) -> Result<Self> {
        if e == 0 {
            return Ok(1.0);
        }
        if *self == 0.0 && e < 0 {
            return Err(Error::ZeroToNegativePower {
                exponent: e,
                context: context.to_string(),
            });
        }
        let e = i32::try_from(e).map_err(|_| domain(format!("exponent {e} too large")))?;
        Ok(self.powi(e))
    }
}

/// Sign `(-1)^k`.
pub fn sign(k: i64) -> i64 {
    if k.is_even() {
        1
    } else {
        -1
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binom_ext_examples() {
        assert_eq!(binom_ext(4, &int(2)).unwrap(), int(6));
        assert_eq!(binom_ext(3, &rat(3, 2)).unwrap(), int(0));
        assert_eq!(binom_ext(3, &int(5)).unwrap(), int(0));
        assert_eq!(binom_ext(5, &int(-1)).unwrap(), int(0));
        assert!(matches!(binom_ext(-1, &int(0)), Err(Error::Domain(_))));
    }

    #[test]
    fn binom_matches_factorial_definition() {
        for n in 0..=30u64 {
            for m in 0..=n {
                let expected = factorial(n) / (factorial(m) * factorial(n - m));
                assert_eq!(
                    binom_ext(n as i64, &int(m as i64)).unwrap(),
                    Rational::from_integer(expected)
                );
            }
        }
    }

    #[test]
    fn pascal_identity() {
        for n in 2..=30i64 {
            for m in 1..n {
                let lhs = binom_ext(n, &int(m)).unwrap();
                let rhs = binom_ext(n - 1, &int(m)).unwrap() + binom_ext(n - 1, &int(m - 1)).unwrap();
                assert_eq!(lhs, rhs, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn generalized_binomial() {
        // (1+u)^{-1} = 1 - u + u^2 - ...
        assert_eq!(binom_general(-1, 3), BigInt::from(-1));
        assert_eq!(binom_general(-2, 2), BigInt::from(3));
        assert_eq!(binom_general(5, 2), BigInt::from(10));
        assert_eq!(binom_general(2, 3), BigInt::from(0));
    }

    #[test]
    fn pow_int_examples() {
        assert_eq!(pow_int(&rat(3, 2), 2).unwrap(), rat(9, 4));
        assert_eq!(pow_int(&rat(5, 7), 0).unwrap(), int(1));
        assert_eq!(pow_int(&int(0), 0).unwrap(), int(1));
        assert_eq!(pow_int(&rat(1, 2), -1).unwrap(), int(2));
        assert_eq!(pow_int(&rat(-2, 3), -3).unwrap(), rat(-27, 8));
        let err = pow_int_in(&int(0), -1, "term p=0").unwrap_err();
        assert_eq!(
            err,
            Error::ZeroToNegativePower {
                exponent: -1,
                context: "term p=0".into()
            }
        );
    }

    #[test]
    fn f64_scalar_power_conventions() {
        assert_eq!(0.0f64.pow_checked(0, "x").unwrap(), 1.0);
        assert!(0.0f64.pow_checked(-1, "x").is_err());
        assert_eq!(2.0f64.pow_checked(-2, "x").unwrap(), 0.25);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("1/6").unwrap(), rat(1, 6));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational(" 3 ").unwrap(), int(3));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("2/4").unwrap(), rat(1, 2));
        for bad in ["", "1/0", "abc", "1.2.3", "0.1e3", "/3", "."] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn format_round_trips() {
        for r in [rat(1, 6), int(1), int(0), rat(-7, 3)] {
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
    }

    proptest! {
        #[test]
        fn pow_exponents_add(num in -20i64..20, den in 1i64..20, e1 in -6i64..6, e2 in -6i64..6) {
            let b = rat(num, den);
            let lhs = pow_int(&b, e1).and_then(|x| pow_int(&b, e2).map(|y| x * y));
            let rhs = pow_int(&b, e1 + e2);
            if let (Ok(l), Ok(r)) = (lhs, rhs) {
                prop_assert_eq!(l, r);
            }
        }

        #[test]
        fn stays_in_lowest_terms(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let x = rat(a, b) * rat(c, d) + rat(c, b);
            prop_assert!(x.denom() > &BigInt::zero());
            prop_assert!(x.numer().gcd(x.denom()).is_one());
        }
    }
}
