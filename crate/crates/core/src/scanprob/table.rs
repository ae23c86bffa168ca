//! Grid tabulation with exact and float columns side by side.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{evaluate, Regime, StatKind};
use crate::exactnum::{to_f64, Rational};

/// Largest relative gap allowed between the float and exact columns.
pub const FLOAT_REL_TOL: f64 = 1e-10;

/// Probabilities at or below this are exempt from the relative comparison.
pub const FLOAT_REL_FLOOR: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub kind: StatKind,
    #[serde(rename = "N")]
    pub n: i64,
    pub w: String,
    pub p_exact: Option<String>,
    pub p_exact_value: Option<f64>,
    pub p_float: Option<f64>,
    pub regime: Option<Regime>,
    pub active_terms: Option<usize>,
    /// `false` when the float column strays from the exact one.
    pub agree: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl TableRow {
    pub fn relative_error(&self) -> Option<f64> {
        let (e, f) = (self.p_exact_value?, self.p_float?);
        if e == 0.0 {
            return Some(f.abs());
        }
        Some(((f - e) / e).abs())
    }
}

fn row(kind: StatKind, n: i64, w: &Rational) -> TableRow {
    let mut out = TableRow {
        kind,
        n,
        w: w.to_string(),
        p_exact: None,
        p_exact_value: None,
        p_float: None,
        regime: None,
        active_terms: None,
        agree: false,
        error: None,
    };
    let exact = match evaluate::<Rational>(kind, n, w) {
        Ok(v) => v,
        Err(e) => {
            out.error = Some(e.to_string());
            return out;
        }
    };
    let float = match evaluate::<f64>(kind, n, w) {
        Ok(v) => v,
        Err(e) => {
            out.error = Some(format!("float mode: {e}"));
            return out;
        }
    };
    let e = to_f64(&exact.p);
    out.p_exact = Some(exact.p.to_string());
    out.p_exact_value = Some(e);
    out.p_float = Some(float.p);
    out.regime = Some(exact.regime);
    out.active_terms = Some(exact.active_terms);
    out.agree = e <= FLOAT_REL_FLOOR || ((float.p - e) / e).abs() <= FLOAT_REL_TOL;
    out
}

/// Rows for every `(N, w)` pair, `N` outermost, in input order. Evaluation
/// errors are recorded on their row rather than aborting the table.
pub fn tabulate(kind: StatKind, ns: &[i64], ws: &[Rational]) -> Vec<TableRow> {
    let pairs: Vec<(i64, &Rational)> = ns.iter().flat_map(|&n| ws.iter().map(move |w| (n, w))).collect();
    pairs.into_par_iter().map(|(n, w)| row(kind, n, w)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    #[test]
    fn linear_three_points_is_the_range_law() {
        let ws: Vec<Rational> = (1..10).map(|j| rat(j, 10)).collect();
        let rows = tabulate(StatKind::P3, &[3], &ws);
        for (r, w) in rows.iter().zip(&ws) {
            let want = int(3) * w * w - int(2) * w * w * w;
            assert_eq!(r.p_exact.as_deref(), Some(want.to_string().as_str()));
            assert!(r.agree);
        }
    }

    #[test]
    fn saturated_row() {
        let rows = tabulate(StatKind::Pc3, &[10], &[rat(1, 5)]);
        assert_eq!(rows[0].regime, Some(Regime::Saturated));
        assert_eq!(rows[0].p_exact.as_deref(), Some("1"));
    }

    #[test]
    fn empty_grid() {
        assert!(tabulate(StatKind::Pc3, &[5], &[]).is_empty());
        assert!(tabulate(StatKind::Pc3, &[], &[rat(1, 3)]).is_empty());
    }

    #[test]
    fn errors_stay_on_their_row() {
        let rows = tabulate(StatKind::Pc3, &[2, 5], &[rat(1, 3)]);
        assert!(rows[0].error.is_some());
        assert!(rows[1].error.is_none());
    }
}
