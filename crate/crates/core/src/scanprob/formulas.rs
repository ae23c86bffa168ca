//! The three closed forms, written once over [`Scalar`] so exact and float
//! evaluation share a term sequence.

use num_traits::{One, Zero};

use super::StatKind;
use crate::error::{domain, Result};
use crate::exactnum::{binom_int, ceil_i64, floor_i64, int, pow_int_in, rat, Rational, Scalar};

/// Value of a survival sum and how many summands were nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct Survival<T> {
    pub value: T,
    pub active_terms: usize,
}

struct Acc<T> {
    sum: T,
    active: usize,
}

impl<T: Scalar> Acc<T> {
    fn new() -> Self {
        Self {
            sum: T::scalar_zero(),
            active: 0,
        }
    }

    fn push(&mut self, term: T) {
        if !term.is_zero_value() {
            self.active += 1;
        }
        self.sum = self.sum.clone() + term;
    }
}

fn binom<T: Scalar>(n: i64, m: i64) -> T {
    T::from_bigint(&binom_int(n, m))
}

/// Largest summation index of the piece containing `w`.
pub fn default_upper(kind: StatKind, w: &Rational) -> Result<i64> {
    let reciprocal = |v: &Rational| -> Result<i64> {
        if v.is_zero() {
            return Err(domain("summation limit is unbounded at this width"));
        }
        Ok(floor_i64(&v.recip()))
    };
    Ok(match kind {
        StatKind::PcNm1 => reciprocal(&(Rational::one() - w))?,
        StatKind::Pc3 => reciprocal(w)?,
        StatKind::P3 => reciprocal(w)? + 1,
    })
}

/// First index of the `p`-sums of the `k = 3` forms.
fn lower_index(n: i64) -> i64 {
    ceil_i64(&rat(n + 1, 2))
}

/// `P_c(N−1)` summands for `p = 1 ..= upper`. Their negated sum is the
/// probability itself: the `p = 0` summand is identically one (see
/// [`pc_nm1_leading_term`]), so subtracting it from one is skipped.
pub fn pc_nm1_tail<T: Scalar>(n: i64, w: &Rational, upper: i64) -> Result<Survival<T>> {
    let v = T::from_rational(&(Rational::one() - w));
    let one = T::scalar_one();
    let nt = T::from_i64(n);
    let front = one.clone() - nt.clone() * v.clone();
    let mut acc = Acc::new();
    for p in 1..=upper.min(n) {
        let pt = T::from_i64(p);
        let a = (one.clone() - pt.clone() * v.clone()).pow_checked(n - p - 1, "pc_nm1 (1-p(1-w))")?;
        let b = (one.clone() - (nt.clone() - pt) * v.clone()).pow_checked(p - 1, "pc_nm1 (1-(N-p)(1-w))")?;
        acc.push(binom::<T>(n, p) * front.clone() * a * b);
    }
    Ok(Survival {
        value: acc.sum,
        active_terms: acc.active,
    })
}

/// The `p = 0` summand `C(N,0)·(1−N(1−w))·1^{N−1}·(1−N(1−w))^{−1}`,
/// evaluated literally.
pub fn pc_nm1_leading_term(n: i64, w: &Rational) -> Result<Rational> {
    let base = Rational::one() - int(n) * (Rational::one() - w);
    Ok(&base * pow_int_in(&base, -1, "pc_nm1 p=0 term")?)
}

/// `1 − P_c(N−1)`: one plus the tail.
pub fn pc_nm1_survival<T: Scalar>(n: i64, w: &Rational, upper: i64) -> Result<Survival<T>> {
    let tail = pc_nm1_tail::<T>(n, w, upper)?;
    Ok(Survival {
        value: T::scalar_one() + tail.value,
        active_terms: tail.active_terms + 1,
    })
}

/// `1 − P_c(3)` summed through `p = upper`.
pub fn pc3_survival<T: Scalar>(n: i64, w: &Rational, upper: i64) -> Result<Survival<T>> {
    let wt = T::from_rational(w);
    let one = T::scalar_one();
    let nt = T::from_i64(n);
    let nw3 = nt.clone() * wt.clone() - T::from_i64(3);
    let mut acc = Acc::new();
    acc.push((T::from_i64(2) - nt.clone() * wt.clone()).pow_checked(n - 1, "pc_3 (2-Nw)")?);
    if n % 2 == 0 {
        let half = T::from_rational(&rat(n, 2));
        let base = one.clone() - half * wt.clone();
        let central = binom::<T>(n, n / 2) * T::from_rational(&rat(1, 2));
        acc.push(central * nw3.clone() * base.pow_checked(n - 2, "pc_3 (1-Nw/2)")?);
    }
    for p in lower_index(n)..=upper {
        let c = binom::<T>(n, 3 * p - n);
        if c.is_zero_value() {
            continue;
        }
        let pt = T::from_i64(p);
        let a = (one.clone() - pt.clone() * wt.clone()).pow_checked(3 * p - n - 1, "pc_3 (1-pw)")?;
        let b = (one.clone() - (nt.clone() - pt) * wt.clone()).pow_checked(2 * n - 3 * p - 1, "pc_3 (1-(N-p)w)")?;
        acc.push(nw3.clone() * c * a * b);
    }
    Ok(signed(n, acc))
}

/// `1 − P(3)` summed through `p = upper`.
pub fn p3_survival<T: Scalar>(n: i64, w: &Rational, upper: i64) -> Result<Survival<T>> {
    let wt = T::from_rational(w);
    let one = T::scalar_one();
    let mut acc = Acc::new();
    if n % 2 == 0 {
        let coef = binom::<T>(n, n / 2) * T::from_rational(&rat(-2, n + 2));
        let base = one.clone() - T::from_i64(n / 2 - 1) * wt.clone();
        acc.push(coef * base.pow_checked(n, "p_3 (1-(N/2-1)w)")?);
    }
    for p in lower_index(n)..=upper {
        let a = one.clone() - T::from_i64(p - 1) * wt.clone();
        let b = one.clone() - T::from_i64(n - p - 1) * wt.clone();
        let mut inner = T::scalar_zero();
        let mut nonzero = false;
        for (d, weight) in [(-1, 1), (0, -2), (1, 1)] {
            let m = 3 * p - n + d;
            let c = binom::<T>(n, m);
            if c.is_zero_value() {
                continue;
            }
            nonzero = true;
            let term = T::from_i64(weight)
                * c
                * a.pow_checked(m, "p_3 (1-(p-1)w)")?
                * b.pow_checked(n - m, "p_3 (1-(N-p-1)w)")?;
            inner = inner + term;
        }
        if nonzero {
            acc.push(inner);
        }
    }
    Ok(signed(n, acc))
}

fn signed<T: Scalar>(n: i64, acc: Acc<T>) -> Survival<T> {
    let value = if n % 2 == 1 { acc.sum } else { -acc.sum };
    Survival {
        value,
        active_terms: acc.active,
    }
}

/// Survival bracket of `kind` through summation index `upper`, with no
/// threshold or range handling.
pub fn raw_survival<T: Scalar>(kind: StatKind, n: i64, w: &Rational, upper: i64) -> Result<Survival<T>> {
    match kind {
        StatKind::PcNm1 => pc_nm1_survival(n, w, upper),
        StatKind::Pc3 => pc3_survival(n, w, upper),
        StatKind::P3 => p3_survival(n, w, upper),
    }
}
