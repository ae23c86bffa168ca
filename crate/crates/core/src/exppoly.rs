//! The ring of exponential polynomials `Σ c·s^a·e^{b·s}`.
//!
//! Every transform-domain object built from the convolution recursion lives
//! here: `a` is a nonnegative power of `s`, `b` an integer exponent rate and
//! `c` an exact rational. Values are kept canonical (no zero coefficients,
//! unique keys) after every operation, so `==` is semantic equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{factorial, int, to_f64, Rational};

/// Canonical exponential polynomial. Terms are keyed by `(b, a)` so that
/// iteration and rendering follow the `(b, a)` order.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct ExpPoly {
    terms: BTreeMap<(i64, u32), Rational>,
}

impl ExpPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0, 0)
    }

    /// `c · s^a · e^{b s}`
    pub fn monomial(c: Rational, a: u32, b: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((b, a), c);
        }
        Self { terms }
    }

    /// `e^{b s}`
    pub fn exp(b: i64) -> Self {
        Self::monomial(Rational::one(), 0, b)
    }

    /// `s^a`
    pub fn s_pow(a: u32) -> Self {
        Self::monomial(Rational::one(), a, 0)
    }

    /// Builds from `(c, a, b)` triples, merging duplicates.
    pub fn from_terms<I: IntoIterator<Item = (Rational, u32, i64)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (c, a, b) in terms {
            out.add_term(c, a, b);
        }
        out
    }

    fn add_term(&mut self, c: Rational, a: u32, b: i64) {
        if c.is_zero() {
            return;
        }
        let key = (b, a);
        match self.terms.get_mut(&key) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates `(c, a, b)` in `(b, a)` order.
    pub fn terms(&self) -> impl Iterator<Item = (&Rational, u32, i64)> {
        self.terms.iter().map(|(&(b, a), c)| (c, a, b))
    }

    pub fn coefficient(&self, a: u32, b: i64) -> Rational {
        self.terms.get(&(b, a)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(key, c)| (*key, c * k)).collect(),
        }
    }

    /// Multiplies by `e^{b s}`.
    pub fn shift_exp(&self, b: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(&(eb, a), c)| ((eb + b, a), c.clone())).collect(),
        }
    }

    /// Exact derivative in `s`.
    pub fn diff_s(&self) -> Self {
        let mut out = Self::zero();
        for (c, a, b) in self.terms() {
            if a > 0 {
                out.add_term(c * int(a as i64), a - 1, b);
            }
            if b != 0 {
                out.add_term(c * int(b), a, b);
            }
        }
        out
    }

    /// Antiderivative vanishing at `s = 0`, i.e. `∫_0^s x(p) dp`.
    pub fn integrate_0_to_s(&self) -> Self {
        let mut out = Self::zero();
        for (c, a, b) in self.terms() {
            if b == 0 {
                out.add_term(c / int(a as i64 + 1), a + 1, 0);
                continue;
            }
            // ∫ p^a e^{bp} dp = e^{bp} Σ_k (-1)^k a!/(a-k)! p^{a-k} / b^{k+1}
            let bq = int(b);
            let mut falling = Rational::one();
            let mut bpow = bq.clone();
            for k in 0..=a {
                let mut coef = c * &falling / &bpow;
                if k % 2 == 1 {
                    coef = -coef;
                }
                out.add_term(coef.clone(), a - k, b);
                if k == a {
                    // subtract the antiderivative at p = 0, where only the p^0 term survives
                    out.add_term(-coef, 0, 0);
                } else {
                    falling *= int((a - k) as i64);
                    bpow *= &bq;
                }
            }
        }
        out
    }

    /// Value at `s = 0`: the sum of the `a = 0` coefficients.
    pub fn at_zero(&self) -> Rational {
        self.terms
            .iter()
            .filter(|((_, a), _)| *a == 0)
            .fold(Rational::zero(), |acc, (_, c)| acc + c)
    }

    /// Numeric evaluation at a real point; diagnostics only.
    pub fn eval_float(&self, s0: f64) -> Result<f64> {
        let mut acc = 0.0;
        for (c, a, b) in self.terms() {
            let term = to_f64(c) * s0.powi(a as i32) * (b as f64 * s0).exp();
            acc += term;
        }
        if acc.is_finite() {
            Ok(acc)
        } else {
            Err(Error::Overflow(format!("{self} at s = {s0}")))
        }
    }

    /// Units of the ring are the single terms `c·e^{bs}` with `c ≠ 0`.
    pub fn unit_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (&(b, a), c) = self.terms.iter().next()?;
        (a == 0).then(|| Self::monomial(c.recip(), 0, -b))
    }

    /// Largest power of `s` present (0 for the zero element).
    pub fn max_s_degree(&self) -> u32 {
        self.terms.keys().map(|&(_, a)| a).max().unwrap_or(0)
    }

    /// `(x·s)^j / j!`
    pub fn taylor_power(x: &Rational, j: u32) -> Self {
        let c = num_traits::pow(x.clone(), j as usize) / Rational::from_integer(factorial(j as u64));
        Self::monomial(c, j, 0)
    }
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, a, b)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*s^{a}*exp({b}*s)")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> Add<&'a ExpPoly> for &ExpPoly {
    type Output = ExpPoly;
    fn add(self, rhs: &'a ExpPoly) -> ExpPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for ExpPoly {
    type Output = ExpPoly;
    fn add(mut self, rhs: ExpPoly) -> ExpPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&ExpPoly> for ExpPoly {
    fn add_assign(&mut self, rhs: &ExpPoly) {
        for (c, a, b) in rhs.terms() {
            self.add_term(c.clone(), a, b);
        }
    }
}

impl Neg for &ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        ExpPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Neg for ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        -&self
    }
}

impl<'a> Sub<&'a ExpPoly> for &ExpPoly {
    type Output = ExpPoly;
    fn sub(self, rhs: &'a ExpPoly) -> ExpPoly {
        let mut out = self.clone();
        for (c, a, b) in rhs.terms() {
            out.add_term(-c, a, b);
        }
        out
    }
}

impl Sub for ExpPoly {
    type Output = ExpPoly;
    fn sub(self, rhs: ExpPoly) -> ExpPoly {
        &self - &rhs
    }
}

impl<'a> Mul<&'a ExpPoly> for &ExpPoly {
    type Output = ExpPoly;
    fn mul(self, rhs: &'a ExpPoly) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (c1, a1, b1) in self.terms() {
            for (c2, a2, b2) in rhs.terms() {
                out.add_term(c1 * c2, a1 + a2, b1 + b2);
            }
        }
        out
    }
}

impl Mul for ExpPoly {
    type Output = ExpPoly;
    fn mul(self, rhs: ExpPoly) -> ExpPoly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use proptest::prelude::*;

    fn sinh2() -> ExpPoly {
        &ExpPoly::exp(1) - &ExpPoly::exp(-1)
    }

    #[test]
    fn ring_examples() {
        let cosh2 = &ExpPoly::exp(1) + &ExpPoly::exp(-1);
        assert_eq!(&sinh2() * &cosh2, &ExpPoly::exp(2) - &ExpPoly::exp(-2));
        assert_eq!(&sinh2() + &ExpPoly::zero(), sinh2());
        let a = ExpPoly::monomial(int(1), 1, 1);
        let b = ExpPoly::monomial(int(1), 1, -1);
        assert_eq!(&a * &b, ExpPoly::s_pow(2));
        assert!((&sinh2() - &sinh2()).is_zero());
    }

    #[test]
    fn diff_examples() {
        assert_eq!(ExpPoly::exp(2).diff_s(), ExpPoly::monomial(int(2), 0, 2));
        assert_eq!(ExpPoly::s_pow(2).diff_s(), ExpPoly::monomial(int(2), 1, 0));
        let x = ExpPoly::monomial(int(1), 1, -1);
        let expected = &ExpPoly::exp(-1) - &x;
        assert_eq!(x.diff_s(), expected);
    }

    #[test]
    fn integrate_examples() {
        assert_eq!(ExpPoly::exp(1).integrate_0_to_s(), &ExpPoly::exp(1) - &ExpPoly::one());
        assert_eq!(ExpPoly::one().integrate_0_to_s(), ExpPoly::s_pow(1));
        // e^p (e^p - e^{-p}) -> (e^{2s} - 1)/2 - s
        let integrand = &ExpPoly::exp(1) * &sinh2();
        let expected = ExpPoly::from_terms([(rat(1, 2), 0, 2), (rat(-1, 2), 0, 0), (int(-1), 1, 0)]);
        assert_eq!(integrand.integrate_0_to_s(), expected);
        assert_eq!(expected.diff_s(), integrand);
    }

    #[test]
    fn eval_examples() {
        assert_eq!(sinh2().eval_float(0.0).unwrap(), 0.0);
        assert_eq!(ExpPoly::s_pow(2).eval_float(3.0).unwrap(), 9.0);
        let x = ExpPoly::from_terms([(int(1), 0, 2), (int(-1), 0, 0), (int(-2), 1, 0)]);
        let v = x.eval_float(1.0).unwrap();
        assert!((v - (1f64.exp().powi(2) - 3.0)).abs() < 1e-12);
        assert!((v - 4.389056).abs() < 1e-6);
        assert!(matches!(ExpPoly::exp(1000).eval_float(1.0), Err(Error::Overflow(_))));
    }

    #[test]
    fn display_is_sorted_by_b_then_a() {
        let x = ExpPoly::from_terms([(int(3), 0, 1), (int(-2), 1, 0), (int(1), 0, 0), (rat(1, 2), 2, -1)]);
        assert_eq!(
            x.to_string(),
            "1/2*s^2*exp(-1*s) + 1*s^0*exp(0*s) + -2*s^1*exp(0*s) + 3*s^0*exp(1*s)"
        );
        assert_eq!(ExpPoly::zero().to_string(), "0");
    }

    #[test]
    fn units() {
        let u = ExpPoly::monomial(int(-2), 0, 3);
        assert_eq!(&u * &u.unit_inverse().unwrap(), ExpPoly::one());
        assert!(ExpPoly::s_pow(1).unit_inverse().is_none());
        assert!(sinh2().unit_inverse().is_none());
    }

    fn arb_exppoly() -> impl Strategy<Value = ExpPoly> {
        prop::collection::vec((-5i64..5, 1i64..4, 0u32..4, -3i64..4), 0..5).prop_map(|ts| {
            ExpPoly::from_terms(ts.into_iter().map(|(n, d, a, b)| (rat(n, d), a, b)))
        })
    }

    proptest! {
        #[test]
        fn integrate_then_diff_round_trips(x in arb_exppoly()) {
            let anti = x.integrate_0_to_s();
            prop_assert_eq!(anti.diff_s(), x);
            prop_assert!(anti.at_zero().is_zero());
        }

        #[test]
        fn ring_axioms(x in arb_exppoly(), y in arb_exppoly(), z in arb_exppoly()) {
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&x + &y, &y + &x);
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert!(x.terms().all(|(c, _, _)| !c.is_zero()));
        }

        #[test]
        fn product_rule(x in arb_exppoly(), y in arb_exppoly()) {
            let lhs = (&x * &y).diff_s();
            let rhs = &(&x.diff_s() * &y) + &(&x * &y.diff_s());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
