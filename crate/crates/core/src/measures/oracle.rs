//! Monte Carlo estimates of the measures straight from their set definitions.
//!
//! The measure at `x` is the density of `Σ(x_i − 1)` under Lebesgue measure
//! on the constraint set, so it equals the `(m−1)`-volume of the slice
//! `Σ x_i = x + m`. The default estimator samples that slice uniformly from a
//! region of known volume and counts how often the constraints hold.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Minimum sample count the oracle accepts.
pub const MIN_ORACLE_SAMPLES: u64 = 100_000;

/// Bin width of the histogram estimator.
pub const DEFAULT_BANDWIDTH: f64 = 0.01;

/// Independent RNG streams per estimate; part of the reproducibility contract.
const STREAMS: u64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MeasureKind {
    /// `f_n`: `0 ≤ x_i ≤ 2`, `x_i + x_{i+1} ≤ 2`.
    FLinear,
    /// `a_n`: as `FLinear` plus `x_n + x_1 ≤ 2`.
    ACyclic,
    /// `b_n`: `x_i ≥ 0`, `x_i + x_{i+1} ≥ 2` around the ring.
    BCyclicGe,
    /// `c_n`: `n + 1` gaps `x_i ≥ 0`; the two end gaps are free and the
    /// `n − 1` interior gaps satisfy `x_i + x_{i+1} ≥ 2`.
    CLinearGe,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 4] = [Self::FLinear, Self::ACyclic, Self::BCyclicGe, Self::CLinearGe];

    pub fn label(self) -> &'static str {
        match self {
            Self::FLinear => "f",
            Self::ACyclic => "a",
            Self::BCyclicGe => "b",
            Self::CLinearGe => "c",
        }
    }

    /// Number of variables behind the index-`n` measure.
    pub fn variables(self, n: usize) -> usize {
        match self {
            Self::CLinearGe => n + 1,
            _ => n,
        }
    }

    pub fn min_n(self) -> usize {
        match self {
            Self::FLinear | Self::CLinearGe => 1,
            Self::ACyclic | Self::BCyclicGe => 2,
        }
    }

    /// Whether the point `xs` (all coordinates already nonnegative) lies in the set.
    pub fn contains(self, xs: &[f64]) -> bool {
        let adjacent = xs.windows(2).map(|w| w[0] + w[1]);
        match self {
            Self::FLinear => xs.iter().all(|v| *v <= 2.0) && adjacent.clone().all(|s| s <= 2.0),
            Self::ACyclic => {
                xs.iter().all(|v| *v <= 2.0)
                    && adjacent.clone().all(|s| s <= 2.0)
                    && xs[xs.len() - 1] + xs[0] <= 2.0
            }
            Self::BCyclicGe => adjacent.clone().all(|s| s >= 2.0) && xs[xs.len() - 1] + xs[0] >= 2.0,
            Self::CLinearGe => {
                let interior = &xs[1..xs.len() - 1];
                interior.windows(2).all(|w| w[0] + w[1] >= 2.0)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Estimator {
    /// Uniform sampling of the slice itself; no smoothing bias.
    Slice,
    /// Uniform sampling of the box `[0, 2]^n` and a histogram of the sum;
    /// only for the `≤ 2` kinds.
    Histogram { bandwidth: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub value: f64,
    /// Binomial standard error, with the hit fraction smoothed as
    /// `(hits+1)/(samples+2)` so it stays positive when no sample hits.
    pub std_error: f64,
    pub samples: u64,
    /// Histogram bin width; zero for the slice estimator.
    pub bandwidth: f64,
}

fn factorial_f64(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Counts hits over `samples` draws split across the fixed stream set.
fn count_hits<F>(samples: u64, seed: u64, draw: F) -> u64
where
    F: Fn(&mut ChaCha8Rng, &mut Vec<f64>) -> bool + Sync,
{
    (0..STREAMS)
        .into_par_iter()
        .map(|s| {
            let quota = samples / STREAMS + u64::from(s < samples % STREAMS);
            let mut rng = stream_rng(seed, s);
            let mut buf = Vec::new();
            (0..quota).filter(|_| draw(&mut rng, &mut buf)).count() as u64
        })
        .sum()
}

fn smoothed_se(hits: u64, samples: u64) -> f64 {
    let p = (hits as f64 + 1.0) / (samples as f64 + 2.0);
    (p * (1.0 - p) / samples as f64).sqrt()
}

fn check_args(kind: MeasureKind, n: usize, samples: u64) -> Result<()> {
    if n < kind.min_n() || n > 6 {
        return Err(domain(format!(
            "density oracle for {} needs {} <= n <= 6, got {n}",
            kind.label(),
            kind.min_n()
        )));
    }
    if samples < MIN_ORACLE_SAMPLES {
        return Err(Error::InsufficientSamples {
            got: samples,
            min: MIN_ORACLE_SAMPLES,
        });
    }
    Ok(())
}

/// Slice estimate of the index-`n` measure of `kind` at `x`.
pub fn density_oracle(kind: MeasureKind, n: usize, x: f64, samples: u64, seed: u64) -> Result<DensityEstimate> {
    density_oracle_with(kind, n, x, samples, seed, Estimator::Slice)
}

pub fn density_oracle_with(
    kind: MeasureKind,
    n: usize,
    x: f64,
    samples: u64,
    seed: u64,
    estimator: Estimator,
) -> Result<DensityEstimate> {
    check_args(kind, n, samples)?;
    match estimator {
        Estimator::Slice => Ok(slice_estimate(kind, n, x, samples, seed)),
        Estimator::Histogram { bandwidth } => {
            if !matches!(kind, MeasureKind::FLinear | MeasureKind::ACyclic) {
                return Err(domain("histogram estimator needs a bounded box (f or a kinds)"));
            }
            if bandwidth.is_nan() || bandwidth <= 0.0 {
                return Err(domain(format!("bandwidth must be positive, got {bandwidth}")));
            }
            Ok(histogram_estimate(kind, n, x, samples, seed, bandwidth))
        }
    }
}

fn slice_estimate(kind: MeasureKind, n: usize, x: f64, samples: u64, seed: u64) -> DensityEstimate {
    let m = kind.variables(n);
    let total = x + m as f64;
    let (hits, volume) = match kind {
        // first m−1 coordinates uniform in [0, 2], the last one is fixed by the sum
        MeasureKind::FLinear | MeasureKind::ACyclic => {
            let hits = count_hits(samples, seed, |rng, buf| {
                buf.clear();
                let mut acc = 0.0;
                for _ in 1..m {
                    let v = 2.0 * rng.random::<f64>();
                    acc += v;
                    buf.push(v);
                }
                let last = total - acc;
                buf.push(last);
                (0.0..=2.0).contains(&last) && kind.contains(buf)
            });
            (hits, 2f64.powi(m as i32 - 1))
        }
        // uniform point of the simplex {x ≥ 0, Σx = total} from sorted uniforms
        MeasureKind::BCyclicGe | MeasureKind::CLinearGe => {
            if total <= 0.0 {
                return DensityEstimate {
                    value: 0.0,
                    std_error: 0.0,
                    samples,
                    bandwidth: 0.0,
                };
            }
            let hits = count_hits(samples, seed, |rng, buf| {
                buf.clear();
                buf.push(0.0);
                for _ in 1..m {
                    buf.push(rng.random::<f64>());
                }
                buf.sort_by(f64::total_cmp);
                buf.push(1.0);
                for i in 0..m {
                    buf[i] = (buf[i + 1] - buf[i]) * total;
                }
                buf.truncate(m);
                kind.contains(buf)
            });
            (hits, total.powi(m as i32 - 1) / factorial_f64(m - 1))
        }
    };
    DensityEstimate {
        value: volume * hits as f64 / samples as f64,
        std_error: volume * smoothed_se(hits, samples),
        samples,
        bandwidth: 0.0,
    }
}

fn histogram_estimate(kind: MeasureKind, n: usize, x: f64, samples: u64, seed: u64, bandwidth: f64) -> DensityEstimate {
    let half = 0.5 * bandwidth;
    let hits = count_hits(samples, seed, |rng, buf| {
        buf.clear();
        let mut sum = 0.0;
        for _ in 0..n {
            let v = 2.0 * rng.random::<f64>();
            sum += v - 1.0;
            buf.push(v);
        }
        (sum - x).abs() <= half && kind.contains(buf)
    });
    let scale = 2f64.powi(n as i32) / bandwidth;
    DensityEstimate {
        value: scale * hits as f64 / samples as f64,
        std_error: scale * smoothed_se(hits, samples),
        samples,
        bandwidth,
    }
}
