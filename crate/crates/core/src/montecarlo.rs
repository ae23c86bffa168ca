//! Plain Monte Carlo for the minimum `k`-point window widths `W(k)` and
//! `W_c(k)`, plus the multiple-coverage dual on the circle.
//!
//! Every estimate is a pure function of its arguments: draws are split over
//! a fixed number of ChaCha8 streams keyed by `(seed, stream index)` and the
//! per-stream counts are merged in stream order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959963984540054;

/// Stream count used when a caller does not choose one.
pub const DEFAULT_STREAMS: u64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Linear,
    Circular,
}

impl Geometry {
    pub fn label(self) -> &'static str {
        match self {
            Self::Linear => "linear",
            Self::Circular => "circular",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    #[serde(rename = "N")]
    pub n: usize,
    pub k: usize,
    pub samples: u64,
    pub seed: u64,
    pub streams: u64,
}

impl SimConfig {
    pub fn new(n: usize, k: usize, samples: u64, seed: u64, streams: u64) -> Result<Self> {
        let config = Self {
            n,
            k,
            samples,
            seed,
            streams,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        check_window(self.n, self.k)?;
        if self.samples == 0 {
            return Err(domain("samples must be at least 1"));
        }
        if self.streams == 0 {
            return Err(domain("streams must be at least 1"));
        }
        Ok(())
    }

    /// Draws assigned to `stream`; the first `samples % streams` get one extra.
    fn quota(&self, stream: u64) -> u64 {
        self.samples / self.streams + u64::from(stream < self.samples % self.streams)
    }
}

fn check_window(n: usize, k: usize) -> Result<()> {
    if k < 2 || k > n {
        return Err(domain(format!("need 2 <= k <= N, got N = {n}, k = {k}")));
    }
    Ok(())
}

/// Empirical `P(W ≤ w)` with its Wilson interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CdfEstimate {
    pub w: f64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub samples: u64,
    pub successes: u64,
}

impl CdfEstimate {
    /// Estimate with a 95% Wilson interval.
    pub fn from_counts(w: f64, successes: u64, samples: u64) -> Self {
        let (ci_low, ci_high) = wilson_interval(successes, samples, Z95);
        Self {
            w,
            p_hat: successes as f64 / samples as f64,
            ci_low,
            ci_high,
            samples,
            successes,
        }
    }

    /// Wilson interval at `z` normal quantiles.
    pub fn interval(&self, z: f64) -> (f64, f64) {
        wilson_interval(self.successes, self.samples, z)
    }

    /// Whether `p` lies in the Wilson interval at `z`.
    pub fn brackets(&self, p: f64, z: f64) -> bool {
        let (lo, hi) = self.interval(z);
        lo <= p && p <= hi
    }

    /// Binomial standard error, smoothed so it never vanishes.
    pub fn standard_error(&self) -> f64 {
        let p = (self.successes as f64 + 1.0) / (self.samples as f64 + 2.0);
        (p * (1.0 - p) / self.samples as f64).sqrt()
    }

    /// The same draws counted as the complementary event.
    pub fn complement(&self) -> Self {
        Self::from_counts(self.w, self.samples - self.successes, self.samples)
    }
}

/// Whether two independent estimates of one quantity agree within `sigmas`
/// combined standard errors.
pub fn agree(a: &CdfEstimate, b: &CdfEstimate, sigmas: f64) -> bool {
    let se = a.standard_error().hypot(b.standard_error());
    (a.p_hat - b.p_hat).abs() <= sigmas * se
}

/// Wilson score interval for `successes` out of `samples`, clamped to
/// `[0, 1]` and widened if needed to contain the point estimate.
pub fn wilson_interval(successes: u64, samples: u64, z: f64) -> (f64, f64) {
    if samples == 0 {
        return (0.0, 1.0);
    }
    let n = samples as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = (centre - half).clamp(0.0, 1.0).min(p);
    let hi = (centre + half).clamp(0.0, 1.0).max(p);
    (lo, hi)
}

fn fill_sorted<R: Rng + ?Sized>(n: usize, rng: &mut R, buf: &mut Vec<f64>) {
    buf.clear();
    buf.extend((0..n).map(|_| rng.random::<f64>()));
    buf.sort_unstable_by(f64::total_cmp);
}

/// Smallest width of a window holding `k` of the sorted points on `[0, 1]`.
pub fn w_linear(sorted: &[f64], k: usize) -> f64 {
    sorted
        .windows(k)
        .map(|win| win[k - 1] - win[0])
        .fold(f64::INFINITY, f64::min)
}

/// As [`w_linear`] with windows also allowed to wrap past one.
pub fn w_circular(sorted: &[f64], k: usize) -> f64 {
    let n = sorted.len();
    let wrapped = (n + 2 - k..=n)
        .map(|i| sorted[i + k - 2 - n] + 1.0 - sorted[i - 1])
        .fold(f64::INFINITY, f64::min);
    w_linear(sorted, k).min(wrapped)
}

/// One draw of `W(k)` for `N` uniform points.
pub fn sample_w_linear<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> f64 {
    let mut buf = Vec::with_capacity(n);
    fill_sorted(n, rng, &mut buf);
    w_linear(&buf, k)
}

/// One draw of `W_c(k)` for `N` uniform points on the unit circle.
pub fn sample_w_circular<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> f64 {
    let mut buf = Vec::with_capacity(n);
    fill_sorted(n, rng, &mut buf);
    w_circular(&buf, k)
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Runs `draw` `config.samples` times across the configured streams and
/// returns per-bucket counts. `draw` returns the bucket to increment, or
/// `None` for no bucket.
fn tally<F>(config: &SimConfig, buckets: usize, draw: F) -> Vec<u64>
where
    F: Fn(&mut ChaCha8Rng, &mut Vec<f64>) -> Option<usize> + Sync,
{
    let per_stream: Vec<Vec<u64>> = (0..config.streams)
        .into_par_iter()
        .map(|s| {
            let mut rng = stream_rng(config.seed, s);
            let mut buf = Vec::with_capacity(config.n);
            let mut counts = vec![0u64; buckets];
            for _ in 0..config.quota(s) {
                if let Some(b) = draw(&mut rng, &mut buf) {
                    counts[b] += 1;
                }
            }
            counts
        })
        .collect();
    let mut total = vec![0u64; buckets];
    for counts in per_stream {
        for (t, c) in total.iter_mut().zip(counts) {
            *t += c;
        }
    }
    total
}

/// Empirical distribution function of `W(k)` or `W_c(k)` at every point of
/// `w_grid`, all from one shared set of draws. Output follows grid order.
pub fn empirical_cdf(config: &SimConfig, geometry: Geometry, w_grid: &[f64]) -> Result<Vec<CdfEstimate>> {
    config.validate()?;
    if let Some(w) = w_grid.iter().find(|w| w.is_nan()) {
        return Err(domain(format!("grid point {w} is not a number")));
    }
    let mut order: Vec<usize> = (0..w_grid.len()).collect();
    order.sort_by(|&i, &j| w_grid[i].total_cmp(&w_grid[j]));
    let sorted_grid: Vec<f64> = order.iter().map(|&i| w_grid[i]).collect();
    let k = config.k;
    let n = config.n;
    // bucket b counts draws whose width first fits at sorted_grid[b]
    let hist = tally(config, sorted_grid.len(), |rng, buf| {
        fill_sorted(n, rng, buf);
        let width = match geometry {
            Geometry::Linear => w_linear(buf, k),
            Geometry::Circular => w_circular(buf, k),
        };
        let b = sorted_grid.partition_point(|&g| g < width);
        (b < sorted_grid.len()).then_some(b)
    });
    let mut out = vec![CdfEstimate::from_counts(0.0, 0, config.samples); w_grid.len()];
    let mut running = 0;
    for (b, &i) in order.iter().enumerate() {
        running += hist[b];
        out[i] = CdfEstimate::from_counts(w_grid[i], running, config.samples);
    }
    Ok(out)
}

/// Smallest number of arcs `[start, start + len)` covering any point of the
/// unit circle.
pub fn min_coverage_depth(starts: &[f64], len: f64) -> usize {
    let mut events: Vec<(f64, i64)> = Vec::with_capacity(2 * starts.len());
    let mut depth: i64 = 0;
    for &s in starts {
        let end = s + len;
        if end > 1.0 {
            // covers zero; it ends after wrapping
            depth += 1;
            events.push((end - 1.0, -1));
        } else if end < 1.0 {
            events.push((end, -1));
        }
        events.push((s, 1));
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0));
    // depth after the last event wraps round to the start, so only the
    // values between event positions matter
    let mut least = if events.is_empty() { depth } else { i64::MAX };
    for (i, &(at, delta)) in events.iter().enumerate() {
        depth += delta;
        if events.get(i + 1).is_none_or(|next| next.0 > at) {
            least = least.min(depth);
        }
    }
    least.max(0) as usize
}

/// Fraction of draws in which `N` arcs of length `1 − w`, placed uniformly,
/// cover the whole circle at least `N + 1 − k` times. Estimates
/// `1 − P_c(k; N, w)`.
pub fn coverage_dual(n: usize, k: usize, w: f64, samples: u64, seed: u64) -> Result<CdfEstimate> {
    let config = SimConfig::new(n, k, samples, seed, DEFAULT_STREAMS)?;
    if !(w > 0.0 && w < 1.0) {
        return Err(domain(format!("w must lie in (0, 1), got {w}")));
    }
    let need = n + 1 - k;
    let hits = tally(&config, 1, |rng, buf| {
        buf.clear();
        buf.extend((0..n).map(|_| rng.random::<f64>()));
        (min_coverage_depth(buf, 1.0 - w) >= need).then_some(0)
    });
    Ok(CdfEstimate::from_counts(w, hits[0], samples))
}
