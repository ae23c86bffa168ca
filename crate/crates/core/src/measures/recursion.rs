//! Numerical evaluation of the linear chain density `f_n` from its
//! convolution recursion
//!
//! `f_n(x) = Σ_{i=1}^{n} ∫_0^1 (f_{i−1} ∗ f_{n−i})(x/p + 1)·p^{n−2} dp`,
//!
//! with `f_0` the convolution identity and `f_1 = rect(x/2)`.
//!
//! Densities are stored as cell averages on a uniform grid whose cells align
//! with the integers, where all the knots of these piecewise polynomials sit.
//! Convolving two cell-average tables is exact for piecewise constants, and
//! point values are reconstructed linearly without crossing an integer.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;

use crate::error::{domain, Result};

/// Cells per unit length used when no resolution is given.
pub const DEFAULT_RESOLUTION: usize = 400;

const MAX_N: usize = 6;
const GAUSS_POINTS: usize = 20;

/// Cell averages over `[−half_width, half_width]`.
#[derive(Clone, Debug)]
struct CellTable {
    half_width: usize,
    res: usize,
    cells: Vec<f64>,
}

impl CellTable {
    fn zeros(half_width: usize, res: usize) -> Self {
        Self {
            half_width,
            res,
            cells: vec![0.0; 2 * half_width * res],
        }
    }

    fn h(&self) -> f64 {
        1.0 / self.res as f64
    }

    fn center(&self, j: usize) -> f64 {
        -(self.half_width as f64) + (j as f64 + 0.5) * self.h()
    }

    /// Integer unit a cell belongs to.
    fn unit(&self, j: usize) -> usize {
        j / self.res
    }

    fn rect(half_width: usize, res: usize) -> Self {
        let mut t = Self::zeros(half_width, res);
        for j in 0..t.cells.len() {
            if t.center(j).abs() < 1.0 {
                t.cells[j] = 1.0;
            }
        }
        t
    }

    fn nonzero_range(&self) -> Option<(usize, usize)> {
        let first = self.cells.iter().position(|v| *v != 0.0)?;
        let last = self.cells.iter().rposition(|v| *v != 0.0)?;
        Some((first, last))
    }

    /// Exact convolution of the two piecewise-constant functions, averaged
    /// back onto cells.
    fn convolve(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.half_width, self.res);
        let (Some((a0, a1)), Some((b0, b1))) = (self.nonzero_range(), other.nonzero_range()) else {
            return out;
        };
        let offset = (self.half_width * self.res) as isize;
        let half_h = 0.5 * self.h();
        let len = out.cells.len() as isize;
        for k in a0..=a1 {
            let ak = self.cells[k] * half_h;
            if ak == 0.0 {
                continue;
            }
            for l in b0..=b1 {
                let m = k as isize + l as isize - offset;
                let v = ak * other.cells[l];
                if (0..len).contains(&m) {
                    out.cells[m as usize] += v;
                }
                if (0..len).contains(&(m + 1)) {
                    out.cells[(m + 1) as usize] += v;
                }
            }
        }
        out
    }

    fn add_assign(&mut self, other: &Self) {
        for (a, b) in self.cells.iter_mut().zip(&other.cells) {
            *a += b;
        }
    }

    fn eval(&self, y: f64) -> f64 {
        let hw = self.half_width as f64;
        if !(y > -hw && y < hw) {
            return 0.0;
        }
        let last = self.cells.len() - 1;
        let j = (((y + hw) * self.res as f64) as usize).min(last);
        let c = self.center(j);
        let toward = if y >= c { j.checked_add(1) } else { j.checked_sub(1) };
        let away = if y >= c { j.checked_sub(1) } else { j.checked_add(1) };
        let same_unit = |k: Option<usize>| k.filter(|&k| k <= last && self.unit(k) == self.unit(j));
        match same_unit(toward).or_else(|| same_unit(away)) {
            Some(k) => {
                let slope = (self.cells[k] - self.cells[j]) / (self.center(k) - c);
                self.cells[j] + slope * (y - c)
            }
            None => self.cells[j],
        }
    }
}

/// Holds `f_1 … f_{n_max−1}` on one grid so several `f_{n_max}` or
/// `a_{n_max}` values can be evaluated without rebuilding it.
#[derive(Clone, Debug)]
pub struct ChainRecursion {
    n_max: usize,
    tables: Vec<CellTable>,
    rule: GaussLegendre,
}

impl ChainRecursion {
    pub fn new(n_max: usize, resolution: usize) -> Result<Self> {
        if !(1..=MAX_N).contains(&n_max) {
            return Err(domain(format!("recursion oracle supports 1 <= n <= {MAX_N}, got {n_max}")));
        }
        if resolution == 0 {
            return Err(domain("recursion oracle resolution must be positive"));
        }
        let rule = GaussLegendre::new(NonZeroUsize::new(GAUSS_POINTS).expect("nonzero"));
        let mut this = Self {
            n_max,
            tables: vec![CellTable::rect(n_max, resolution)],
            rule,
        };
        for k in 2..n_max {
            let g = this.kernel(k);
            let mut t = CellTable::zeros(n_max, resolution);
            for j in 0..t.cells.len() {
                t.cells[j] = this.transform(&g, k, t.center(j));
            }
            this.tables.push(t);
        }
        Ok(this)
    }

    /// Grid for `f_k`, `1 ≤ k < n_max`.
    fn table(&self, k: usize) -> &CellTable {
        &self.tables[k - 1]
    }

    /// `Σ_i f_{i−1} ∗ f_{k−i}`, using the identity for `f_0`.
    fn kernel(&self, k: usize) -> CellTable {
        let mut g = self.table(k - 1).clone();
        g.add_assign(self.table(k - 1));
        // pairs are symmetric under i ↦ k+1−i
        for i in 2..k {
            let j = k + 1 - i;
            if i > j {
                break;
            }
            let conv = self.table(i - 1).convolve(self.table(k - i));
            g.add_assign(&conv);
            if i != j {
                g.add_assign(&conv);
            }
        }
        g
    }

    /// `∫_0^1 g(x/p + 1)·p^{k−2} dp`, split where `x/p + 1` crosses an integer.
    fn transform(&self, g: &CellTable, k: usize, x: f64) -> f64 {
        let power = |p: f64| p.powi(k as i32 - 2);
        if x == 0.0 {
            return g.eval(1.0) / (k as f64 - 1.0);
        }
        let bound = g.half_width as i64 + 1;
        let mut cuts = vec![0.0, 1.0];
        for m in -bound..=bound {
            if m == 1 {
                continue;
            }
            let p = x / (m as f64 - 1.0);
            if p > 0.0 && p < 1.0 {
                cuts.push(p);
            }
        }
        cuts.sort_by(f64::total_cmp);
        cuts.windows(2)
            .map(|w| self.rule.integrate(w[0], w[1], |p| g.eval(x / p + 1.0) * power(p)))
            .sum()
    }

    /// `f_{n_max}(x)`.
    pub fn f(&self, x: f64) -> f64 {
        if self.n_max == 1 {
            return self.table(1).eval(x);
        }
        let g = self.kernel(self.n_max);
        self.transform(&g, self.n_max, x)
    }

    /// `a_{n_max}(x) = n·∫_0^1 f_{n−1}(x/p + 1)·p^{n−2} dp`, the cyclic chain
    /// obtained by cutting the ring at one variable.
    pub fn a(&self, x: f64) -> Result<f64> {
        let n = self.n_max;
        if n < 2 {
            return Err(domain("cyclic chain needs n >= 2"));
        }
        Ok(n as f64 * self.transform(self.table(n - 1), n, x))
    }
}

/// `f_n(x)` from the recursion, accurate to about `1e−4` at the default
/// resolution.
pub fn f_oracle(n: usize, x: f64, resolution: usize) -> Result<f64> {
    Ok(ChainRecursion::new(n, resolution)?.f(x))
}

/// `a_n(x)` from the recursion.
pub fn a_via_recursion(n: usize, x: f64, resolution: usize) -> Result<f64> {
    ChainRecursion::new(n, resolution)?.a(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rect_and_triangle() {
        assert_eq!(f_oracle(1, 0.0, 50).unwrap(), 1.0);
        assert_eq!(f_oracle(1, 1.5, 50).unwrap(), 0.0);
        let f2 = ChainRecursion::new(2, DEFAULT_RESOLUTION).unwrap();
        for x in [-1.9, -1.0, -0.3] {
            assert!((f2.f(x) - (x + 2.0)).abs() < 1e-4, "x={x} got {}", f2.f(x));
        }
        assert!(f2.f(0.7).abs() < 1e-12);
        assert!(f2.f(-2.2).abs() < 1e-12);
    }

    #[test]
    fn cell_convolution_of_boxes_is_a_triangle() {
        let r = CellTable::rect(3, 40);
        let tri = r.convolve(&r);
        for y in [-1.5, -0.25, 0.6, 1.9] {
            assert!((tri.eval(y) - (2.0 - f64::abs(y))).abs() < 1e-3, "y={y}");
        }
    }

    #[test]
    fn out_of_range_is_rejected() {
        assert!(f_oracle(0, 0.0, 10).is_err());
        assert!(f_oracle(7, 0.0, 10).is_err());
        assert!(f_oracle(3, 0.0, 0).is_err());
        assert!(a_via_recursion(1, 0.0, 10).is_err());
    }
}
