use critpair::experiments::{run, Campaign, ExperimentKind, KRule, ResultTable, TrialStatus, XiRule};
use critpair::measure::Measure;
use critpair::par::Execution;
use critpair::Complex64 as C;

fn pairing() -> Campaign {
    let mut c = Campaign::new(ExperimentKind::Pairing, Measure::unit_circle());
    c.n_values = vec![60, 120];
    c.xi = XiRule::Fixed {
        points: vec![C::new(1.6, 0.2), C::new(-0.3, -1.7)],
    };
    c.k_rule = KRule::Constant { k: 2 };
    c.trials = 6;
    c.base_seed = 42;
    c
}

#[test]
fn sequential_and_parallel_agree() {
    let c = pairing();
    let (a, sa) = run(&c, Execution::Sequential).unwrap();
    let (b, sb) = run(&c, Execution::Parallel).unwrap();
    assert_eq!(a, b);
    assert_eq!(sa, sb);
}

#[test]
fn pairing_is_translation_equivariant() {
    let c = pairing();
    let shift = C::new(-2.0, 3.5);
    let moved = c.translated(shift).unwrap();
    let (ResultTable::Pairing(a), ResultTable::Pairing(b)) = (
        run(&c, Execution::available()).unwrap().0,
        run(&moved, Execution::available()).unwrap().0,
    ) else {
        unreachable!()
    };
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.status, y.status);
        assert_eq!(x.outliers.len(), y.outliers.len());
        for (mx, my) in x.matching.iter().zip(&y.matching) {
            assert_eq!(mx.xi_index, my.xi_index);
            assert!((mx.distance - my.distance).abs() < 1e-8, "{} vs {}", mx.distance, my.distance);
        }
    }
}

#[test]
fn growing_deterministic_roots_converge_weakly() {
    let mut c = Campaign::new(ExperimentKind::Convergence, Measure::unit_circle());
    c.n_values = vec![100, 400];
    c.k_rule = KRule::Power { alpha: 0.5 };
    c.xi = XiRule::Repeat { point: C::new(3.0, 0.0) };
    c.trials = 6;
    c.base_seed = 3;
    let (ResultTable::Convergence(rows), s) = run(&c, Execution::available()).unwrap() else {
        unreachable!()
    };
    assert!(rows.iter().all(|r| r.status == TrialStatus::Success));
    assert_eq!(s.trend_decreasing, Some(true));
}

#[test]
fn results_are_reproducible() {
    let mut c = Campaign::new(ExperimentKind::TwoCirclesInterior, Measure::two_circles());
    c.n_values = vec![80];
    c.trials = 5;
    c.base_seed = 11;
    assert_eq!(
        run(&c, Execution::available()).unwrap(),
        run(&c, Execution::available()).unwrap()
    );
    let mut other = c.clone();
    other.base_seed = 12;
    assert_ne!(
        run(&c, Execution::available()).unwrap().0,
        run(&other, Execution::available()).unwrap().0
    );
}

#[test]
fn growing_root_has_relative_error_of_order_one_over_n() {
    let mut c = Campaign::new(ExperimentKind::Pairing, Measure::unit_circle());
    c.n_values = vec![100, 400, 1600];
    c.xi = XiRule::Growing {
        exponent: 0.4,
        direction: C::new(1.0, 1.0),
    };
    c.trials = 6;
    c.base_seed = 21;
    let (ResultTable::Pairing(reports), s) = run(&c, Execution::available()).unwrap() else {
        unreachable!()
    };
    assert!(s.passed);
    // n · |w - ξ| / |ξ| per trial; C is fitted at the smallest degree
    let scaled = |n: usize| -> Vec<f64> {
        reports
            .iter()
            .filter(|r| r.n == n)
            .map(|r| r.max_distance().unwrap() / r.xi[0].norm() * n as f64)
            .collect()
    };
    let fitted = scaled(100).into_iter().fold(0.0, f64::max);
    assert!(fitted > 0.0 && fitted < 10.0);
    for n in [400, 1600] {
        for v in scaled(n) {
            assert!(v <= 1.5 * fitted, "n={n}: {v} vs fitted {fitted}");
        }
    }
}
