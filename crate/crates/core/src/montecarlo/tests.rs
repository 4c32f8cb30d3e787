use super::*;
use crate::analytic::{success_dynamic, success_static};
use crate::quadrature::QuadratureSpec;

fn params() -> NetworkParams {
    NetworkParams::default()
}

fn spec(policy: Association, trials: u64, seed: u64) -> SimulationSpec {
    SimulationSpec::new(policy, trials, seed).unwrap()
}

fn variants() -> [(Association, HopModel); 3] {
    [
        (Association::Static, HopModel::Independent),
        (Association::Static, HopModel::Correlated),
        (Association::Dynamic, HopModel::Independent),
    ]
}

#[test]
fn window_examples() {
    let p = params();
    assert!((window_radius(&p, 1e-4) - 250.0).abs() < 1e-9);
    assert!(window_radius(&p, 0.5e-4) > window_radius(&p, 1e-4));
    // α = 4 gives R ∝ f^{-1/2}
    let ratio = window_radius(&p, 1e-6) / window_radius(&p, 1e-4);
    assert!((ratio - 10.0).abs() < 1e-9);
    let n = expected_interferers(&p, 1e-4);
    assert!((n - 0.01 * PI * 250.0 * 250.0).abs() < 1e-9);
}

#[test]
fn rejects_bad_inputs() {
    assert!(SimulationSpec::new(Association::Static, 0, 1).is_err());
    let s = spec(Association::Static, 10, 1);
    assert!(s.with_trials(0).is_err());
    assert!(s.with_truncation_fraction(0.0).is_err());
    assert!(s.with_truncation_fraction(0.5).is_err());
    assert!(estimate_success(&params(), 1.5, &s).is_err());
    assert!(sample_realization(&params(), -0.1, &s, 0).is_err());
}

#[test]
fn estimates_are_deterministic() {
    let p = params();
    for estimator in [Estimator::Indicator, Estimator::Conditional] {
        let s = spec(Association::Dynamic, 5_000, 42).with_estimator(estimator);
        let a = estimate_success(&p, 0.3, &s).unwrap();
        let b = estimate_success(&p, 0.3, &s).unwrap();
        assert_eq!(a, b);
        let c = estimate_success(&p, 0.3, &s.with_seed(43)).unwrap();
        assert_ne!(a.p_hat, c.p_hat);
    }
}

#[test]
fn block_split_matches_single_range() {
    let p = params();
    let s = spec(Association::Static, 2 * BLOCK_SIZE + 17, 9);
    let whole = simulate_range(&p, 0.4, &s, 0, s.trials()).unwrap();
    let blocks = (0..s.blocks())
        .map(|b| simulate_block(&p, 0.4, &s, b).unwrap())
        .fold(Tally::default(), Tally::merge);
    assert_eq!(whole.trials, blocks.trials);
    assert_eq!(whole.successes, blocks.successes);
}

#[test]
fn fast_path_matches_materialised_realization() {
    let p = params();
    for (policy, hop) in variants() {
        for p_hit in [0.0, 0.3, 1.0] {
            let s = spec(policy, 1, 5).with_hop_model(hop);
            let ctx = TrialContext::new(&p, p_hit, &s);
            for trial in 0..400 {
                let r = sample_realization(&p, p_hit, &s, trial).unwrap();
                assert_eq!(
                    ctx.indicator(trial),
                    evaluate_trial(&r, &p, policy, r.typical.hit),
                    "{policy:?} {hop:?} p={p_hit} trial {trial}"
                );
                assert_eq!(ctx.conditional(trial), conditional_value(&r, &p, policy, p_hit));
            }
        }
    }
}

#[test]
fn realization_shape_follows_policy() {
    let p = params();
    let r = sample_realization(&p, 0.5, &spec(Association::Static, 1, 1), 0).unwrap();
    assert!(r.backhaul.is_some());
    let s = spec(Association::Static, 1, 1).with_hop_model(HopModel::Correlated);
    assert!(sample_realization(&p, 0.5, &s, 0).unwrap().backhaul.is_none());
    let r = sample_realization(&p, 0.5, &spec(Association::Dynamic, 1, 1), 0).unwrap();
    assert!(r.backhaul.is_none());
    assert_eq!(r.window_radius, 250.0);
    assert!(r.access.windows(2).all(|w| w[0].radius_sq <= w[1].radius_sq));
    assert!(r.access.iter().all(|i| i.radius_sq <= 250.0 * 250.0));
}

#[test]
fn full_hit_probability_marks_every_interferer() {
    let p = params();
    let s = spec(Association::Dynamic, 1, 3);
    for trial in 0..20 {
        let r = sample_realization(&p, 1.0, &s, trial).unwrap();
        assert!(r.typical.hit);
        assert!(r.access.iter().all(|i| i.hit));
        let r = sample_realization(&p, 0.0, &s, trial).unwrap();
        assert!(r.access.iter().all(|i| !i.hit));
    }
}

#[test]
fn interferer_counts_are_poisson() {
    // Mean λπR² = 1963.5; total and non-hit counts within 4σ over 200 trials.
    let p = params();
    let s = spec(Association::Dynamic, 1, 11);
    let trials = 200;
    let p_hit = 0.3;
    let (mut total, mut missed) = (0usize, 0usize);
    for trial in 0..trials {
        let r = sample_realization(&p, p_hit, &s, trial).unwrap();
        total += r.access.len();
        missed += r.access.iter().filter(|i| !i.hit).count();
    }
    let mean = expected_interferers(&p, 1e-4);
    let check = |count: usize, m: f64| {
        let sd = (m / trials as f64).sqrt();
        let avg = count as f64 / trials as f64;
        assert!((avg - m).abs() < 4.0 * sd, "{avg} vs {m}");
    };
    check(total, mean);
    check(missed, mean * (1.0 - p_hit));
}

#[test]
fn empty_field_without_noise_always_succeeds() {
    let p = NetworkParams::builder().sigma2(0.0).build().unwrap();
    let s = spec(Association::Static, 1, 1);
    for trial in 0..50 {
        let mut r = sample_realization(&p, 0.5, &s, trial).unwrap();
        r.access.clear();
        r.backhaul = Some(Vec::new());
        r.tail_compensation = false;
        for policy in Association::ALL {
            assert!(evaluate_trial(&r, &p, policy, false));
            assert!(evaluate_trial(&r, &p, policy, true));
            assert_eq!(conditional_value(&r, &p, policy, 0.5), 1.0);
        }
    }
}

#[test]
fn threshold_extremes() {
    for policy in Association::ALL {
        for theta in [0.0, 1e-9] {
            let p = params().with_theta(theta).unwrap();
            let e = estimate_success(&p, 0.5, &spec(policy, 500, 2)).unwrap();
            assert_eq!(e.p_hat, 1.0, "{policy:?} θ={theta}");
        }
        let p = params().with_theta(1e12).unwrap();
        let e = estimate_success(&p, 0.5, &spec(policy, 500, 2)).unwrap();
        assert_eq!(e.p_hat, 0.0);
    }
}

#[test]
fn outside_mass_matches_exact_quartic_integral() {
    // For α = 4 the direction-averaged integral is π[1/(R²−b²) + b²/(R²−b²)²].
    for (window, b) in [(250.0f64, 5.0f64), (100.0, 7.5), (40.0, 2.0)] {
        let d = window * window - b * b;
        let exact = PI * (1.0 / d + b * b / (d * d));
        let approx = trial::outside_mass(4.0, window, b * b);
        assert!(
            (approx - exact).abs() < 3.0 * (b / window).powi(4) * exact,
            "{approx} {exact}"
        );
    }
    let plain = trial::outside_mass(3.0, 10.0, 0.0);
    assert!((plain - 2.0 * PI / 10.0).abs() < 1e-12);
}

#[test]
fn window_sufficiency() {
    // The inner points of a smaller window are the same draws, so the
    // difference is pure truncation effect.
    let p = params().with_theta(2.0).unwrap();
    for (policy, hop) in variants() {
        let base = spec(policy, 2_000, 8)
            .with_estimator(Estimator::Conditional)
            .with_hop_model(hop);
        let a = estimate_success(&p, 0.25, &base).unwrap();
        let small = base.with_truncation_fraction(4e-4).unwrap();
        let b = estimate_success(&p, 0.25, &small).unwrap();
        assert!(
            (a.p_hat - b.p_hat).abs() < 0.05 * a.std_error,
            "{policy:?} {hop:?} {a:?} {b:?}"
        );
        let raw = estimate_success(&p, 0.25, &small.with_tail_compensation(false)).unwrap();
        assert!(raw.p_hat > b.p_hat);
    }
}

#[test]
fn agrees_with_closed_forms_at_moderate_trials() {
    let p = params();
    let q = QuadratureSpec::default();
    for p_hit in [0.0, 0.5] {
        let exact = [
            (Association::Static, success_static(&p, p_hit).unwrap()),
            (Association::Dynamic, success_dynamic(&p, p_hit, &q).unwrap()),
        ];
        for (policy, value) in exact {
            for estimator in [Estimator::Indicator, Estimator::Conditional] {
                let s = spec(policy, 20_000, 77).with_estimator(estimator);
                let e = estimate_success(&p, p_hit, &s).unwrap();
                assert!(
                    e.agrees_with(value, 4.0),
                    "{policy:?} {estimator:?} p={p_hit}: {e:?} vs {value}"
                );
            }
        }
    }
}

#[test]
fn conditional_has_lower_variance() {
    let p = params();
    let s = spec(Association::Dynamic, 20_000, 3);
    let a = estimate_success(&p, 0.25, &s).unwrap();
    let b = estimate_success(&p, 0.25, &s.with_estimator(Estimator::Conditional)).unwrap();
    assert!(b.std_error < 0.7 * a.std_error);
}

#[test]
fn curve_points_match_single_estimates() {
    let p = params();
    let hits = [0.0, 0.25, 0.5];
    for (policy, hop) in variants() {
        let s = spec(policy, 3_000, 4)
            .with_hop_model(hop)
            .with_estimator(Estimator::Conditional);
        let curve = estimate_curve(&p, &hits, &s).unwrap();
        assert_eq!(curve.ratios[0].value, 1.0);
        assert_eq!(curve.ratios[0].std_error, 0.0);
        for (k, &h) in hits.iter().enumerate() {
            let single = estimate_success(&p, h, &s).unwrap();
            assert_eq!(curve.points[k], single, "{policy:?} {hop:?} p={h}");
            let r = curve.ratios[k];
            assert!((r.value - single.p_hat / curve.points[0].p_hat).abs() < 1e-14);
        }
    }
    assert!(estimate_curve(&p, &[], &spec(Association::Static, 1, 1)).is_err());
    assert!(estimate_curve(&p, &[0.5; 17], &spec(Association::Static, 1, 1)).is_err());
    assert!(estimate_curve(&p, &[0.5, 2.0], &spec(Association::Static, 1, 1)).is_err());
}

#[test]
fn compensated_window_is_insensitive_to_truncation() {
    // Same inner draws; a ten times smaller truncation fraction changes the
    // compensated estimates by far less than 1e-5.
    let p = params();
    let hits = [0.0, 0.5];
    for policy in Association::ALL {
        let s = spec(policy, 300, 21);
        let coarse = estimate_curve(&p, &hits, &s.with_truncation_fraction(1e-3).unwrap()).unwrap();
        let fine = estimate_curve(&p, &hits, &s).unwrap();
        for k in 0..hits.len() {
            assert!(
                (coarse.points[k].p_hat - fine.points[k].p_hat).abs() < 1e-5,
                "{policy:?}"
            );
        }
    }
}

#[test]
fn curve_ratios_agree_with_closed_forms() {
    let p = params();
    let q = QuadratureSpec::default();
    let s = spec(Association::Static, 40_000, 6)
        .with_truncation_fraction(1e-3)
        .unwrap();
    let c = estimate_curve(&p, &[0.0, 0.5], &s).unwrap();
    let exact = success_static(&p, 0.5).unwrap() / success_static(&p, 0.0).unwrap();
    assert!((c.ratios[1].value - exact).abs() < 4.0 * c.ratios[1].std_error);
    let s = spec(Association::Dynamic, 40_000, 6)
        .with_truncation_fraction(1e-3)
        .unwrap();
    let c = estimate_curve(&p, &[0.0, 0.25], &s).unwrap();
    let exact = success_dynamic(&p, 0.25, &q).unwrap() / success_dynamic(&p, 0.0, &q).unwrap();
    assert!((c.ratios[1].value - exact).abs() < 4.0 * c.ratios[1].std_error);
}
