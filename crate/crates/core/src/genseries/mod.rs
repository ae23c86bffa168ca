//! Truncated power series in `t` and the generating-function side of the
//! derivation: Catalan parameters, the Riccati closed form, the circular and
//! inclusion–exclusion series, and Lagrange coefficient extraction.

mod catalan;
mod lagrange;
mod series;
mod transform;
mod verify;

/// Default truncation order for the verification suites.
pub const DEFAULT_ORDER: usize = 12;

pub use catalan::{catalan_params, CatalanParams};
pub use lagrange::{direct_extract, lagrange_extract, sum_term_extractions, Extraction};
pub use series::{Coef, TruncSeries};
pub use transform::{
    a_tilde, a_tilde_series, b_c_tilde_series, b_tilde, c_tilde, f_tilde_recursive, riccati_solution,
    FTildeTable, TransformSeries,
};
pub use verify::{
    check_riccati, q_over_r_expansion, riccati_residual, verify_identities, verify_lagrange, verify_recursion,
    verify_riccati, verify_series,
};
