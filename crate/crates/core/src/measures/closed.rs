//! Closed-form piecewise polynomials for the cyclic `≤ 2` measure `a_n`, the
//! cyclic `≥ 2` measure `b_n` and the linear `≥ 2` measure `c_n`.
//!
//! Every step factor is evaluated through [`Side`], so the same code gives the
//! value at a point (`H(0) = 1`) and the left limit at a piece boundary.

use num_traits::{One, Zero};

use crate::error::{domain, Result};
use crate::exactnum::{binom_ext, factorial, int, pow_int_in, rat, sign, Rational};

/// Which one-sided limit a step factor `H(v)` takes at `v = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `H(0) = 0`: the limit from below.
    Left,
    /// `H(0) = 1`: the point value.
    Right,
}

fn step(v: &Rational, side: Side) -> bool {
    match side {
        Side::Left => v > &Rational::zero(),
        Side::Right => v >= &Rational::zero(),
    }
}

/// `C(n, twice/2)`, zero when `twice` is odd or out of range.
fn binom_half(n: i64, twice: i64) -> Rational {
    binom_ext(n, &rat(twice, 2)).expect("n is nonnegative")
}

/// `coef·u^{eu}·v^{ev}`, skipping the powers when the coefficient vanishes so
/// out-of-range binomials never meet a meaningless exponent.
fn term(coef: Rational, u: &Rational, eu: i64, v: &Rational, ev: i64, ctx: &str) -> Result<Rational> {
    if coef.is_zero() {
        return Ok(coef);
    }
    Ok(coef * pow_int_in(u, eu, ctx)? * pow_int_in(v, ev, ctx)?)
}

fn fact(n: i64) -> Rational {
    Rational::from_integer(factorial(n as u64))
}

fn require(n: i64, min: i64, name: &str) -> Result<()> {
    if n < min {
        return Err(domain(format!("{name} needs n >= {min}, got {n}")));
    }
    Ok(())
}

pub fn a_closed(n: i64, x: &Rational) -> Result<Rational> {
    a_closed_side(n, x, Side::Right)
}

pub fn a_closed_side(n: i64, x: &Rational, side: Side) -> Result<Rational> {
    require(n, 2, "a_closed")?;
    let ctx = "a_closed";
    let mut sum = Rational::zero();
    let start = if n % 2 == 0 { 2 } else { 1 };
    for i in (start..=n).step_by(2) {
        let plus = x + int(i);
        if !step(&plus, side) {
            continue;
        }
        let minus = x - int(i);
        let first = term(binom_half(n - 1, n - i), &minus, (n - i) / 2, &plus, (n + i - 2) / 2, ctx)?;
        let second = term(binom_half(n - 1, n - i - 2), &minus, (n - i - 2) / 2, &plus, (n + i) / 2, ctx)?;
        sum += (first - second) / int(i);
    }
    let mut value = sum * int(n) / fact(n - 1);
    if step(x, side) {
        let lead = int(2).pow((n - 1) as i32) * pow_int_in(x, n - 1, ctx)? / fact(n - 1);
        let central = binom_half(n, n) / int(2) * pow_int_in(x, n - 2, ctx)? * (x - int(n)) / fact(n - 1);
        value += central - lead;
    }
    Ok(value)
}

pub fn b_closed(n: i64, x: &Rational) -> Result<Rational> {
    b_closed_side(n, x, Side::Right)
}

pub fn b_closed_side(n: i64, x: &Rational, side: Side) -> Result<Rational> {
    require(n, 2, "b_closed")?;
    let ctx = "b_closed";
    let mut sum = Rational::zero();
    let start = if n % 2 == 0 { 2 } else { 1 };
    for i in (start..=n / 3).step_by(2) {
        let minus = x - int(i);
        if !step(&minus, side) {
            continue;
        }
        let plus = x + int(i);
        let first = term(binom_half(n - 1, n - 3 * i), &plus, (n - 3 * i) / 2, &minus, (n + 3 * i - 2) / 2, ctx)?;
        let second = term(binom_half(n - 1, n - 3 * i - 2), &plus, (n - 3 * i - 2) / 2, &minus, (n + 3 * i) / 2, ctx)?;
        sum += (first - second) / int(i);
    }
    let mut value = sum * int(n * sign(n)) / fact(n - 1);
    if step(x, side) {
        let lead = int(sign(n - 1)) * int(2).pow((n - 1) as i32) * pow_int_in(x, n - 1, ctx)? / fact(n - 1);
        let central = binom_half(n, n) / int(2) * pow_int_in(x, n - 2, ctx)? * (x * int(3) + int(n)) / fact(n - 1);
        value += lead + central;
    }
    Ok(value)
}

/// Valid from `n = 1`, where it is the density `(x+2)·H(x+2)` of two free gaps.
pub fn c_closed(n: i64, x: &Rational) -> Result<Rational> {
    c_closed_side(n, x, Side::Right)
}

pub fn c_closed_side(n: i64, x: &Rational, side: Side) -> Result<Rational> {
    require(n, 1, "c_closed")?;
    let ctx = "c_closed";
    let shifted = x + int(3);
    let mut sum = Rational::zero();
    let start = n % 2;
    for i in (start..=(n + 2) / 3).step_by(2) {
        let lo = &shifted - int(i);
        if !step(&lo, side) {
            continue;
        }
        let hi = &shifted + int(i);
        for (twice, weight) in [(n - 3 * i + 2, 1), (n - 3 * i, -2), (n - 3 * i - 2, 1)] {
            let e = twice / 2;
            sum += term(binom_half(n, twice) * int(weight), &hi, e, &lo, n - e, ctx)?;
        }
    }
    let mut value = sum * int(sign(n - 1)) / fact(n);
    if step(&shifted, side) {
        value += int(2 * sign(n - 1)) / int(n + 2) * binom_half(n, n) * pow_int_in(&shifted, n, ctx)? / fact(n);
    }
    Ok(value)
}

/// Total volume of the `n`-variable slice `{x_i ≥ 0, Σ(x_i − 1) = x}`:
/// `(x+n)^{n−1}/(n−1)!`, zero when `x + n ≤ 0`.
pub fn simplex_volume(n: i64, x: &Rational) -> Result<Rational> {
    require(n, 1, "simplex_volume")?;
    let total = x + int(n);
    if total <= Rational::zero() {
        return Ok(if n == 1 && total.is_zero() { Rational::one() } else { Rational::zero() });
    }
    Ok(pow_int_in(&total, n - 1, "simplex_volume")? / fact(n - 1))
}
