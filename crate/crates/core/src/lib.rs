//! Exact distributions of continuous scan statistics.
//!
//! For `N` i.i.d. uniform points on the unit interval or the unit circle,
//! this crate evaluates in exact rational arithmetic
//!
//! * `P(3; N, w)`: the linear 3-point scan statistic,
//! * `P_c(3; N, w)`: its circular counterpart,
//! * `P_c(N−1; N, w)`: the circular `(N−1)`-point scan statistic,
//!
//! from closed-form piecewise polynomials, and checks those closed forms
//! against everything that can ground-truth them: the transform-domain
//! generating functions they are derived from ([`genseries`]), the underlying
//! Lebesgue measures and their Monte Carlo oracles ([`measures`]), classical
//! small-`N` distributions ([`scanprob::baseline_cdf`]) and direct simulation
//! of the spacings and of the random-arc coverage dual ([`montecarlo`]).

pub mod error;
pub mod exactnum;
pub mod exppoly;
pub mod genseries;
pub mod measures;
pub mod montecarlo;
pub mod report;
pub mod scanprob;

pub use error::{Error, Result};
pub use exactnum::Rational;
pub use exppoly::ExpPoly;
pub use genseries::TruncSeries;
