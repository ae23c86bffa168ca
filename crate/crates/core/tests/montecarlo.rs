use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use scanstat::exactnum::{rat, to_f64, Rational};
use scanstat::montecarlo::*;
use scanstat::scanprob::{baseline_cdf, evaluate, pc_3, Baseline, StatKind};

const M: u64 = 1_000_000;

#[test]
fn mean_min_pair_gap_of_three_points() {
    // P(W(2) ≤ w) = 1 − (1−2w)³ on [0, 1/2], so E W(2) = 1/8
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let draws: Vec<f64> = (0..M).map(|_| sample_w_linear(3, 2, &mut rng)).collect();
    let mean = draws.iter().sum::<f64>() / M as f64;
    let var = draws.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (M - 1) as f64;
    let se = (var / M as f64).sqrt();
    assert!((mean - 0.125).abs() <= 3.0 * se, "mean {mean} se {se}");
}

#[test]
fn circular_pair_gap_of_three_points() {
    let config = SimConfig::new(3, 2, M, 17, DEFAULT_STREAMS).unwrap();
    let est = empirical_cdf(&config, Geometry::Circular, &[1.0 / 6.0]).unwrap()[0];
    assert!(est.ci_low <= 0.75 && 0.75 <= est.ci_high, "{est:?}");
}

#[test]
fn three_point_circular_window_matches_exact() {
    let config = SimConfig::new(5, 3, M, 23, DEFAULT_STREAMS).unwrap();
    let est = empirical_cdf(&config, Geometry::Circular, &[0.3]).unwrap()[0];
    let exact = to_f64(&pc_3(5, &rat(3, 10)).unwrap().p);
    assert!(est.brackets(exact, 4.0), "{est:?} vs {exact}");
}

#[test]
fn reproducible_per_seed_and_stream_count() {
    let grid = [0.1, 0.2, 0.3];
    let run = |streams| {
        let config = SimConfig::new(6, 3, 50_001, 99, streams).unwrap();
        empirical_cdf(&config, Geometry::Linear, &grid).unwrap()
    };
    let (one, four) = (run(1), run(4));
    assert_eq!(one, run(1));
    assert_eq!(four, run(4));
    assert_ne!(one, four);
    assert!(four.iter().all(|e| e.samples == 50_001));
}

#[test]
fn coverage_dual_documented_values() {
    let full = coverage_dual(3, 3, 0.2, M, 31).unwrap();
    assert!(full.brackets(1.0 - 3.0 / 25.0, 4.0), "{full:?}");
    let half = coverage_dual(4, 3, 0.25, M, 37).unwrap();
    assert!(half.brackets(0.5, 4.0), "{half:?}");
}

#[test]
fn coverage_dual_vanishes_as_arcs_shrink() {
    let est = coverage_dual(5, 3, 0.999, 100_000, 41).unwrap();
    assert_eq!(est.successes, 0);
}

#[test]
fn coverage_dual_agrees_with_circular_simulation() {
    for (n, k, w) in [(3, 3, 0.2), (6, 4, 0.3), (5, 2, 0.1)] {
        let dual = coverage_dual(n, k, w, 400_000, 43).unwrap();
        let config = SimConfig::new(n, k, 400_000, 47, DEFAULT_STREAMS).unwrap();
        let direct = empirical_cdf(&config, Geometry::Circular, &[w]).unwrap()[0].complement();
        assert!(agree(&dual, &direct, 4.0), "N={n} k={k} w={w}: {dual:?} vs {direct:?}");
    }
}

#[test]
fn baselines_match_simulation() {
    let n = 5;
    let ws: Vec<Rational> = (1..10).map(|j| rat(j, 10)).collect();
    let grid: Vec<f64> = ws.iter().map(to_f64).collect();
    for b in Baseline::ALL {
        let (k, circular) = b.scan_window(n);
        let geometry = if circular { Geometry::Circular } else { Geometry::Linear };
        let config = SimConfig::new(n as usize, k as usize, 400_000, 53, DEFAULT_STREAMS).unwrap();
        let est = empirical_cdf(&config, geometry, &grid).unwrap();
        for (e, w) in est.iter().zip(&ws) {
            let exact = to_f64(&baseline_cdf(b, n, w).unwrap());
            assert!(e.brackets(exact, 4.0), "{b} w={w}: {e:?} vs {exact}");
        }
    }
}

#[test]
fn linear_three_point_window_matches_exact() {
    let n = 8;
    let ws = [rat(1, 20), rat(1, 10), rat(1, 5)];
    let grid: Vec<f64> = ws.iter().map(to_f64).collect();
    let config = SimConfig::new(n, 3, 400_000, 59, DEFAULT_STREAMS).unwrap();
    let est = empirical_cdf(&config, Geometry::Linear, &grid).unwrap();
    for (e, w) in est.iter().zip(&ws) {
        let exact = to_f64(&evaluate::<Rational>(StatKind::P3, n as i64, w).unwrap().p);
        assert!(e.brackets(exact, 4.0), "w={w}: {e:?} vs {exact}");
    }
}
