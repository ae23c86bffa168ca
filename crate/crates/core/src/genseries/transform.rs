//! Transform-domain generating functions.
//!
//! `f̃_n(s) = s^n·L{f_n}(s)` is produced two ways: by iterating the
//! integral recursion from its base cases, and as the `t^n` coefficient of
//! the closed-form Riccati solution `F = −e^{−s}·P/(t·Q)`. The circular and
//! inclusion–exclusion series `A`, `B` and `Q/R·e^{2s}` are derived from the
//! same `Q` and `R`.

use super::catalan::{catalan_params, CatalanParams};
use super::series::TruncSeries;
use crate::error::Result;
use crate::exactnum::{int, sign, Rational};
use crate::exppoly::ExpPoly;

/// Memo table for the integral recursion
/// `f̃_n(s) = Σ_{i=1}^{n} ∫_0^s e^p f̃_{i−1}(p) f̃_{n−i}(p) dp`, `n ≥ 2`,
/// seeded with `f̃_0 = 1` and `f̃_1 = e^s − e^{−s}`.
///
/// The table is owned by one caller; share the finished values, not the table.
#[derive(Clone, Debug)]
pub struct FTildeTable {
    values: Vec<ExpPoly>,
}

impl Default for FTildeTable {
    fn default() -> Self {
        Self::new()
    }
}

impl FTildeTable {
    pub fn new() -> Self {
        Self {
            values: vec![ExpPoly::one(), &ExpPoly::exp(1) - &ExpPoly::exp(-1)],
        }
    }

    pub fn get(&mut self, n: usize) -> &ExpPoly {
        while self.values.len() <= n {
            let next = self.step(self.values.len());
            self.values.push(next);
        }
        &self.values[n]
    }

    /// Applies the recursion once; only valid for `n ≥ 2`.
    fn step(&self, n: usize) -> ExpPoly {
        debug_assert!(n >= 2);
        let mut sum = ExpPoly::zero();
        // f̃_{i−1}·f̃_{n−i} is symmetric under i ↦ n+1−i
        for j in 0..n {
            let k = n - 1 - j;
            if j > k {
                break;
            }
            let prod = &self.values[j] * &self.values[k];
            let weight = if j == k { int(1) } else { int(2) };
            sum += &prod.scale(&weight);
        }
        sum.shift_exp(1).integrate_0_to_s()
    }
}

pub fn f_tilde_recursive(n: usize) -> ExpPoly {
    FTildeTable::new().get(n).clone()
}

/// `Q`, `P`, `R` and `F` truncated at a common order.
#[derive(Clone, Debug)]
pub struct TransformSeries {
    pub params: CatalanParams,
    pub q: TruncSeries<ExpPoly>,
    pub p: TruncSeries<ExpPoly>,
    pub r: TruncSeries<ExpPoly>,
    pub f: TruncSeries<ExpPoly>,
}

impl TransformSeries {
    pub fn build(order: usize) -> Result<Self> {
        // F needs P/t, so work one order higher and truncate.
        let ext = order + 1;
        let pe = catalan_params(ext);
        let t = TruncSeries::t(ext);
        let a1 = &pe.alpha1;
        let a2 = &pe.alpha2;
        let a1t = a1.add(&t);
        let a2t = a2.add(&t);

        let e_a1 = TruncSeries::exp_of_rate(a1)?;
        let e_a2 = TruncSeries::exp_of_rate(a2)?;
        let e_neg_a1 = TruncSeries::exp_of_rate(&a1.neg())?;
        let e_neg_a2 = TruncSeries::exp_of_rate(&a2.neg())?;

        let q = a2t.lift().mul(&e_a1).sub(&a1t.lift().mul(&e_a2));
        let p = a1.mul(&a2t).lift().mul(&e_a1).sub(&a2.mul(&a1t).lift().mul(&e_a2));
        let r = a2.mul(&a2t).lift().mul(&e_neg_a1).sub(&a1.mul(&a1t).lift().mul(&e_neg_a2));

        let q_k = q.truncate(order);
        let f = p
            .shift_down(1)?
            .div(&q_k)?
            .mul_coef(&(-ExpPoly::exp(-1)));

        Ok(Self {
            params: catalan_params(order),
            q: q_k,
            p: p.truncate(order),
            r: r.truncate(order),
            f,
        })
    }

    pub fn order(&self) -> usize {
        self.q.order()
    }

    fn minus_z(&self) -> TruncSeries<ExpPoly> {
        self.params.z.neg().lift()
    }

    /// `A(t, s) = −ln(Q(t, s)/(−z))`; `ã_n = n·[t^n]A`.
    pub fn a_series(&self) -> Result<TruncSeries<ExpPoly>> {
        Ok(self.q.div(&self.minus_z())?.log()?.neg())
    }

    /// `−ln(R(t, s)/(−z))`; `b̃_n = n·(−1)^n·[t^n]` of it.
    pub fn b_series(&self) -> Result<TruncSeries<ExpPoly>> {
        Ok(self.r.div(&self.minus_z())?.log()?.neg())
    }

    /// `Q/R·e^{2s}`; `c̃_n = (−1)^{n−1}·[t^{n−1}]` of it.
    pub fn c_series(&self) -> Result<TruncSeries<ExpPoly>> {
        Ok(self.q.div(&self.r)?.mul_coef(&ExpPoly::exp(2)))
    }
}

/// Closed-form Riccati solution `F(t, s)` through `t^order`.
pub fn riccati_solution(order: usize) -> Result<TruncSeries<ExpPoly>> {
    Ok(TransformSeries::build(order)?.f)
}

pub fn a_tilde_series(order: usize) -> Result<TruncSeries<ExpPoly>> {
    TransformSeries::build(order)?.a_series()
}

pub fn b_c_tilde_series(order: usize) -> Result<(TruncSeries<ExpPoly>, TruncSeries<ExpPoly>)> {
    let ts = TransformSeries::build(order)?;
    Ok((ts.b_series()?, ts.c_series()?))
}

pub fn a_tilde(n: usize, a_series: &TruncSeries<ExpPoly>) -> ExpPoly {
    a_series.coef(n).scale(&int(n as i64))
}

pub fn b_tilde(n: usize, b_series: &TruncSeries<ExpPoly>) -> ExpPoly {
    b_series.coef(n).scale(&int(n as i64 * sign(n as i64)))
}

/// Needs `n ≥ 1`.
pub fn c_tilde(n: usize, c_series: &TruncSeries<ExpPoly>) -> ExpPoly {
    c_series.coef(n - 1).scale(&Rational::from_integer(sign(n as i64 - 1).into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_sinh() -> ExpPoly {
        &ExpPoly::exp(1) - &ExpPoly::exp(-1)
    }

    fn f2() -> ExpPoly {
        ExpPoly::from_terms([(int(1), 0, 2), (int(-2), 1, 0), (int(-1), 0, 0)])
    }

    #[test]
    fn recursion_base_cases_and_n2() {
        let mut table = FTildeTable::new();
        assert_eq!(table.get(0), &ExpPoly::one());
        assert_eq!(table.get(1), &two_sinh());
        assert_eq!(table.get(2), &f2());
    }

    #[test]
    fn recursion_must_not_be_applied_at_n1() {
        // e^s − 1 ≠ f̃_1: the integral form only holds from n = 2.
        let naive = ExpPoly::exp(1).integrate_0_to_s();
        assert_eq!(naive, &ExpPoly::exp(1) - &ExpPoly::one());
        assert_ne!(naive, f_tilde_recursive(1));
    }

    #[test]
    fn riccati_low_coefficients() {
        let f = riccati_solution(4).unwrap();
        assert_eq!(f.coef(0), &ExpPoly::one());
        assert_eq!(f.coef(1), &two_sinh());
        assert_eq!(f.coef(2), &f2());
        assert_eq!(f.coef(3), &f_tilde_recursive(3));
    }

    #[test]
    fn q_and_r_constant_terms_are_units() {
        let ts = TransformSeries::build(3).unwrap();
        assert_eq!(ts.q.coef(0), &ExpPoly::constant(int(-1)));
        assert_eq!(ts.r.coef(0), &ExpPoly::constant(int(-1)));
    }

    #[test]
    fn low_order_circular_and_pie_transforms() {
        let ts = TransformSeries::build(4).unwrap();
        let a = ts.a_series().unwrap();
        assert!(a.coef(0).is_zero());
        assert_eq!(a.coef(1), &(&ExpPoly::exp(1) - &ExpPoly::one()));
        assert_eq!(a_tilde(2, &a), f2());
        let b = ts.b_series().unwrap();
        // b_2(x) = (x+2)H(x) has s²·L{b_2} = 1 + 2s
        assert_eq!(b_tilde(2, &b), ExpPoly::from_terms([(int(1), 0, 0), (int(2), 1, 0)]));
        let c = ts.c_series().unwrap();
        // c_1 = (x+2)H(x+2), c_2 = (x+3)²/2·H(x+3)
        assert_eq!(c_tilde(1, &c), ExpPoly::exp(2));
        assert_eq!(c_tilde(2, &c), ExpPoly::exp(3));
    }
}
