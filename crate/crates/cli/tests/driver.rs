use cachenet::driver;
use cachenet_core::montecarlo::{estimate_curve, estimate_success, Estimator};
use cachenet_core::{Association, NetworkParams, SimulationSpec};

#[test]
fn parallel_estimates_match_sequential_bitwise() {
    let params = NetworkParams::default().with_lambda(1e-3).unwrap();
    for policy in Association::ALL {
        for estimator in [Estimator::Indicator, Estimator::Conditional] {
            let spec = SimulationSpec::new(policy, 10_000, 5)
                .unwrap()
                .with_truncation_fraction(1e-3)
                .unwrap()
                .with_estimator(estimator);
            assert_eq!(
                driver::estimate_success(&params, 0.4, &spec).unwrap(),
                estimate_success(&params, 0.4, &spec).unwrap()
            );
        }
        let spec = SimulationSpec::new(policy, 9_000, 6)
            .unwrap()
            .with_truncation_fraction(1e-3)
            .unwrap();
        let p = [0.0, 0.5, 1.0];
        assert_eq!(
            driver::estimate_curve(&params, &p, &spec).unwrap(),
            estimate_curve(&params, &p, &spec).unwrap()
        );
    }
}

#[test]
fn thread_count_does_not_matter() {
    let params = NetworkParams::default();
    let spec = SimulationSpec::new(Association::Static, 20_000, 3)
        .unwrap()
        .with_truncation_fraction(1e-3)
        .unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| driver::estimate_success(&params, 0.25, &spec).unwrap())
    };
    assert_eq!(run(1), run(3));
}
