use scanstat::exactnum::{int, rat, to_f64};
use scanstat::measures::*;

fn assert_close(est: DensityEstimate, truth: f64, sigmas: f64) {
    assert!(
        (est.value - truth).abs() <= sigmas * est.std_error,
        "estimate {} ± {} vs {truth}",
        est.value,
        est.std_error
    );
}

#[test]
fn documented_oracle_points() {
    let m = 400_000;
    let a3 = a_closed(3, &rat(-3, 2)).unwrap();
    assert!(a3 > int(0));
    assert_close(density_oracle(MeasureKind::ACyclic, 3, -1.5, m, 11).unwrap(), to_f64(&a3), 3.0);
    let b4 = b_closed(4, &rat(3, 2)).unwrap();
    assert_close(density_oracle(MeasureKind::BCyclicGe, 4, 1.5, m, 12).unwrap(), to_f64(&b4), 3.0);
    let c2 = c_closed(2, &int(1)).unwrap();
    assert_close(density_oracle(MeasureKind::CLinearGe, 2, 1.0, m, 13).unwrap(), to_f64(&c2), 3.0);
}

#[test]
fn c_closed_holds_from_one_variable_pair() {
    for n in 1..=4 {
        for x in interior_points(MeasureKind::CLinearGe, n) {
            let exact = to_f64(&c_closed(n, &x).unwrap());
            let est = density_oracle(MeasureKind::CLinearGe, n as usize, to_f64(&x), 200_000, 7 + n as u64).unwrap();
            assert!((est.value - exact).abs() <= 4.0 * est.std_error.max(1e-12), "n={n} x={x}");
        }
    }
}

#[test]
fn recursion_reproduces_the_linear_chain_and_a_n() {
    assert!((f_oracle(2, -1.0, DEFAULT_RESOLUTION).unwrap() - 1.0).abs() < RECURSION_TOLERANCE);
    assert_eq!(f_oracle(1, 0.0, DEFAULT_RESOLUTION).unwrap(), 1.0);
    assert!(f_oracle(2, 1.0, DEFAULT_RESOLUTION).unwrap().abs() < 1e-12);
    for c in recursion_checks(6).unwrap() {
        assert!(c.passed, "{c:?}");
    }
}

#[test]
fn recursion_f3_agrees_with_the_oracle() {
    let chain = ChainRecursion::new(3, DEFAULT_RESOLUTION).unwrap();
    for x in [-2.4, -1.3, -0.6, 0.4] {
        let est = density_oracle(MeasureKind::FLinear, 3, x, 400_000, 21).unwrap();
        assert_close(est, chain.f(x), 4.0);
    }
}

#[test]
fn structural_suite_passes() {
    for c in structural_checks(6).unwrap() {
        assert!(c.passed, "{c:?}");
    }
}

#[test]
fn suite_at_reduced_samples() {
    let suite = verify_measures(MeasureSuiteConfig {
        n_max: 4,
        samples: 200_000,
        seed: 5,
        recursion: false,
    })
    .unwrap();
    assert!(suite.report.all_passed(), "{}", suite.report);
    assert!(suite.rows.iter().all(|r| r.passed()));
    assert_eq!(suite.rows.len(), 10 * (3 + 3 + 4));
}

#[test]
fn suite_rejects_bad_range() {
    assert!(verify_measures(MeasureSuiteConfig { n_max: 7, ..Default::default() }).is_err());
    assert!(verify_measures(MeasureSuiteConfig { n_max: 1, ..Default::default() }).is_err());
}
