use num_traits::One;

use super::series::TruncSeries;
use crate::exactnum::{int, rat, Rational};

/// The Catalan-type parameters shared by every generating function:
/// `z = sqrt(1 − 4t²)`, `C = (1 − z)/(2t²)` and the characteristic roots
/// `α1,2 = (1 ± z)/2` of the Riccati equation.
#[derive(Clone, Debug, PartialEq)]
pub struct CatalanParams {
    pub z: TruncSeries<Rational>,
    pub c: TruncSeries<Rational>,
    pub alpha1: TruncSeries<Rational>,
    pub alpha2: TruncSeries<Rational>,
}

/// Binomial series of `sqrt(1 − 4u)` in `u = t²`.
fn sqrt_one_minus_4u(order: usize) -> TruncSeries<Rational> {
    let half = rat(1, 2);
    let mut coefs = vec![Rational::from_integer(0.into()); order + 1];
    // running value of C(1/2, m)·(−4)^m
    let mut term = Rational::one();
    for m in 0..=order / 2 {
        coefs[2 * m] = term.clone();
        let m_q = int(m as i64);
        term = term * (&half - &m_q) / (&m_q + int(1)) * int(-4);
    }
    TruncSeries::from_coefs(coefs, order)
}

pub fn catalan_params(order: usize) -> CatalanParams {
    let z_ext = sqrt_one_minus_4u(order + 2);
    let one = TruncSeries::one(order + 2);
    let c = one
        .sub(&z_ext)
        .scale(&rat(1, 2))
        .shift_down(2)
        .expect("1 − z vanishes to second order");
    let z = z_ext.truncate(order);
    let one = TruncSeries::one(order);
    CatalanParams {
        alpha1: one.add(&z).scale(&rat(1, 2)),
        alpha2: one.sub(&z).scale(&rat(1, 2)),
        z,
        c,
    }
}

impl CatalanParams {
    pub fn order(&self) -> usize {
        self.z.order()
    }

    /// `t·C`
    pub fn t_c(&self) -> TruncSeries<Rational> {
        self.c.shift_up(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::binomial;

    #[test]
    fn catalan_coefficients() {
        let p = catalan_params(12);
        let expected = [1, 1, 2, 5, 14, 42, 132];
        for (m, &cat) in expected.iter().enumerate() {
            assert_eq!(p.c.coef(2 * m), &int(cat));
            let formula = Rational::new(binomial(2 * m as u64, m as u64), (m as i64 + 1).into());
            assert_eq!(p.c.coef(2 * m), &formula);
        }
        for k in (1..=11).step_by(2) {
            assert_eq!(p.c.coef(k), &int(0));
        }
    }

    #[test]
    fn z_coefficients() {
        let p = catalan_params(6);
        assert_eq!(p.z.coef(0), &int(1));
        assert_eq!(p.z.coef(2), &int(-2));
        assert_eq!(p.z.coef(4), &int(-2));
        assert_eq!(p.z.coef(6), &int(-4));
        // z² = 1 − 4t²
        let sq = p.z.mul(&p.z);
        assert_eq!(sq, TruncSeries::from_ints(&[1, 0, -4], 6));
    }

    #[test]
    fn root_relations() {
        for order in [0, 1, 2, 7, 12] {
            let p = catalan_params(order);
            let one = TruncSeries::one(order);
            assert_eq!(p.alpha1.add(&p.alpha2), one);
            let t2 = TruncSeries::monomial(int(1), 2, order);
            assert_eq!(p.alpha1.mul(&p.alpha2), t2);
            assert_eq!(p.alpha2, p.c.shift_up(2));
            assert_eq!(p.alpha1, one.sub(&p.c.shift_up(2)));
        }
    }
}
