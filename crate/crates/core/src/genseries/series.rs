use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{int, Rational};
use crate::exppoly::ExpPoly;

/// Coefficient ring for [`TruncSeries`].
pub trait Coef: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;
    fn scale(&self, k: &Rational) -> Self;
    /// Multiplicative inverse when the element is a unit of the ring.
    fn inverse(&self) -> Option<Self>;
}

impl Coef for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negate(&self) -> Self {
        -self
    }
    fn scale(&self, k: &Rational) -> Self {
        self * k
    }
    fn inverse(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

impl Coef for ExpPoly {
    fn zero() -> Self {
        ExpPoly::zero()
    }
    fn one() -> Self {
        ExpPoly::one()
    }
    fn is_zero(&self) -> bool {
        ExpPoly::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negate(&self) -> Self {
        -self
    }
    fn scale(&self, k: &Rational) -> Self {
        ExpPoly::scale(self, k)
    }
    fn inverse(&self) -> Option<Self> {
        self.unit_inverse()
    }
}

/// Power series in `t` known exactly through `t^order`.
///
/// Binary operations return a series of the smaller operand order; nothing
/// ever reads a coefficient past `order`.
#[derive(Clone, PartialEq, Debug)]
pub struct TruncSeries<C> {
    coefs: Vec<C>,
}

impl<C: Coef> TruncSeries<C> {
    /// Pads with zeros or truncates so that exactly `order + 1` coefficients are kept.
    pub fn from_coefs(mut coefs: Vec<C>, order: usize) -> Self {
        coefs.resize(order + 1, C::zero());
        Self { coefs }
    }

    pub fn zero(order: usize) -> Self {
        Self::from_coefs(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(C::one(), order)
    }

    pub fn constant(c: C, order: usize) -> Self {
        Self::from_coefs(vec![c], order)
    }

    /// `c · t^k`
    pub fn monomial(c: C, k: usize, order: usize) -> Self {
        let mut out = Self::zero(order);
        if k <= order {
            out.coefs[k] = c;
        }
        out
    }

    /// The series `t` itself.
    pub fn t(order: usize) -> Self {
        Self::monomial(C::one(), 1, order)
    }

    pub fn order(&self) -> usize {
        self.coefs.len() - 1
    }

    /// `[t^n]`; panics past the truncation order.
    pub fn coef(&self, n: usize) -> &C {
        assert!(n <= self.order(), "coefficient t^{n} is beyond truncation order {}", self.order());
        &self.coefs[n]
    }

    pub fn coefs(&self) -> &[C] {
        &self.coefs
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot extend truncation order {} to {order}", self.order());
        Self {
            coefs: self.coefs[..=order].to_vec(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coefs.iter().all(Coef::is_zero)
    }

    /// Lowest power with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coefs.iter().position(|c| !c.is_zero())
    }

    pub fn map<D: Coef>(&self, f: impl Fn(&C) -> D) -> TruncSeries<D> {
        TruncSeries {
            coefs: self.coefs.iter().map(f).collect(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&C, &C) -> C) -> Self {
        let order = self.order().min(other.order());
        Self {
            coefs: (0..=order).map(|i| f(&self.coefs[i], &other.coefs[i])).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, C::plus)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, C::minus)
    }

    pub fn neg(&self) -> Self {
        self.map(C::negate)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        self.map(|c| c.scale(k))
    }

    /// Multiplies every coefficient by `c`.
    pub fn mul_coef(&self, c: &C) -> Self {
        self.map(|x| x.times(c))
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut coefs = vec![C::zero(); order + 1];
        for (i, a) in self.coefs[..=order].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coefs[..=order - i].iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coefs[i + j] = coefs[i + j].plus(&a.times(b));
            }
        }
        Self { coefs }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.order());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Multiplies by `t^k`, keeping the order.
    pub fn shift_up(&self, k: usize) -> Self {
        let order = self.order();
        let mut coefs = vec![C::zero(); order + 1];
        if k <= order {
            coefs[k..].clone_from_slice(&self.coefs[..=order - k]);
        }
        Self { coefs }
    }

    /// Divides by `t^k`; the first `k` coefficients must vanish. Order drops by `k`.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if k > self.order() {
            return Err(Error::Domain(format!("cannot divide order-{} series by t^{k}", self.order())));
        }
        if let Some(i) = self.coefs[..k].iter().position(|c| !c.is_zero()) {
            return Err(Error::Domain(format!("division by t^{k} with nonzero t^{i} coefficient")));
        }
        Ok(Self {
            coefs: self.coefs[k..].to_vec(),
        })
    }

    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coefs[0];
        let inv0 = c0
            .inverse()
            .ok_or_else(|| Error::NotInvertible(format!("constant term {c0}")))?;
        let order = self.order();
        let mut out: Vec<C> = Vec::with_capacity(order + 1);
        out.push(inv0.clone());
        for n in 1..=order {
            let mut acc = C::zero();
            for k in 1..=n {
                if !self.coefs[k].is_zero() {
                    acc = acc.plus(&self.coefs[k].times(&out[n - k]));
                }
            }
            out.push(acc.times(&inv0).negate());
        }
        Ok(Self { coefs: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }

    /// `d/dt`; the order drops by one.
    pub fn derivative_t(&self) -> Self {
        let order = self.order();
        if order == 0 {
            return Self::zero(0);
        }
        Self {
            coefs: (1..=order).map(|n| self.coefs[n].scale(&int(n as i64))).collect(),
        }
    }

    /// `∫_0^t`; the order rises by one.
    pub fn integral_t(&self) -> Self {
        let mut coefs = Vec::with_capacity(self.coefs.len() + 1);
        coefs.push(C::zero());
        for (n, c) in self.coefs.iter().enumerate() {
            coefs.push(c.scale(&Rational::new(1.into(), (n as i64 + 1).into())));
        }
        Self { coefs }
    }

    /// Formal logarithm; the constant term must be exactly one.
    pub fn log(&self) -> Result<Self> {
        if self.coefs[0] != C::one() {
            return Err(Error::NotInvertible(format!(
                "log needs constant term 1, got {}",
                self.coefs[0]
            )));
        }
        let order = self.order();
        if order == 0 {
            return Ok(Self::zero(0));
        }
        let inv = self.truncate(order - 1).inverse()?;
        Ok(self.derivative_t().mul(&inv).integral_t())
    }

    /// Formal exponential; the constant term must vanish.
    pub fn exp(&self) -> Result<Self> {
        if !self.coefs[0].is_zero() {
            return Err(Error::Domain(format!("exp needs zero constant term, got {}", self.coefs[0])));
        }
        let order = self.order();
        let mut out = Self::one(order);
        let mut power = Self::one(order);
        for j in 1..=order {
            power = power.mul(self).scale(&Rational::new(1.into(), (j as i64).into()));
            if power.is_zero() {
                break;
            }
            out = out.add(&power);
        }
        Ok(out)
    }
}

impl TruncSeries<Rational> {
    /// Embeds rational coefficients as constant exponential polynomials.
    pub fn lift(&self) -> TruncSeries<ExpPoly> {
        self.map(|c| ExpPoly::constant(c.clone()))
    }

    /// Builds from integer coefficients.
    pub fn from_ints(values: &[i64], order: usize) -> Self {
        Self::from_coefs(values.iter().map(|&v| int(v)).collect(), order)
    }
}

impl TruncSeries<ExpPoly> {
    pub fn diff_s(&self) -> Self {
        self.map(ExpPoly::diff_s)
    }

    /// Coefficientwise substitution `s = 0`.
    pub fn at_s_zero(&self) -> TruncSeries<Rational> {
        self.map(ExpPoly::at_zero)
    }

    /// `e^{rate·s}` for a rational series `rate` with integer constant term.
    ///
    /// Written as `e^{r0·s}·exp((rate − r0)·s)`; the second factor is a series
    /// whose coefficients are polynomials in `s`, so exponent rates stay integral.
    pub fn exp_of_rate(rate: &TruncSeries<Rational>) -> Result<Self> {
        let r0 = rate.coef(0);
        if !r0.is_integer() {
            return Err(Error::Domain(format!("exp rate constant term {r0} is not an integer")));
        }
        let base = i64::try_from(r0.to_integer()).map_err(|_| Error::Domain("rate too large".into()))?;
        let order = rate.order();
        let tail = rate.sub(&TruncSeries::constant(r0.clone(), order));
        let exponent = tail.map(|c| ExpPoly::monomial(c.clone(), 1, 0));
        Ok(exponent.exp()?.mul_coef(&ExpPoly::exp(base)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn inverse_of_one_minus_t() {
        let s = TruncSeries::from_ints(&[1, -1], 6);
        let inv = s.inverse().unwrap();
        assert_eq!(inv, TruncSeries::from_ints(&[1; 7], 6));
        assert_eq!(s.mul(&inv), TruncSeries::one(6));
    }

    #[test]
    fn non_invertible_constant() {
        let s = TruncSeries::from_ints(&[0, 1], 4);
        assert!(matches!(s.inverse(), Err(Error::NotInvertible(_))));
        let e = TruncSeries::<ExpPoly>::t(4).add(&TruncSeries::constant(ExpPoly::s_pow(1), 4));
        assert!(matches!(e.inverse(), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn log_exp_round_trip() {
        let x = TruncSeries::from_coefs(vec![int(0), int(2), rat(-1, 3), int(5)], 8);
        let back = x.exp().unwrap().log().unwrap();
        assert_eq!(back, x);
        // log(1/(1-t)) = Σ t^n / n
        let g = TruncSeries::from_ints(&[1, -1], 5).inverse().unwrap().log().unwrap();
        let expected: Vec<Rational> = (0..=5).map(|n| if n == 0 { int(0) } else { rat(1, n) }).collect();
        assert_eq!(g, TruncSeries::from_coefs(expected, 5));
    }

    #[test]
    fn shifts() {
        let x = TruncSeries::from_ints(&[0, 0, 3, 4], 5);
        let down = x.shift_down(2).unwrap();
        assert_eq!(down.order(), 3);
        assert_eq!(down, TruncSeries::from_ints(&[3, 4], 3));
        assert!(x.shift_down(3).is_err());
        assert_eq!(down.shift_up(2).truncate(3), TruncSeries::from_ints(&[0, 0, 3, 4], 3));
    }

    #[test]
    fn order_is_min_of_operands() {
        let a = TruncSeries::from_ints(&[1, 2, 3], 5);
        let b = TruncSeries::from_ints(&[1, 1], 3);
        assert_eq!(a.mul(&b).order(), 3);
        assert_eq!(a.add(&b).order(), 3);
    }

    #[test]
    fn exp_of_rate_matches_plain_exponential() {
        // rate = 1 + 0·t : e^{s}
        let rate = TruncSeries::constant(int(1), 4);
        let e = TruncSeries::<ExpPoly>::exp_of_rate(&rate).unwrap();
        assert_eq!(e, TruncSeries::constant(ExpPoly::exp(1), 4));
        // rate = t : e^{ts} = Σ (ts)^j/j!
        let e = TruncSeries::<ExpPoly>::exp_of_rate(&TruncSeries::t(3)).unwrap();
        for j in 0..=3u32 {
            assert_eq!(e.coef(j as usize), &ExpPoly::taylor_power(&int(1), j));
        }
        assert!(TruncSeries::<ExpPoly>::exp_of_rate(&TruncSeries::constant(rat(1, 2), 2)).is_err());
    }
}
