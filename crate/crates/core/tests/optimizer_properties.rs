use cachenet_core::optimizer::{
    feasible_curve, feasible_interval, grid_verify, grid_verify_box, objective_value, solve, storage_on_budget, Binding,
};
use cachenet_core::{Association, CacheEconomics, Error, NetworkParams, Objective, QuadratureSpec};
use proptest::prelude::*;

fn econ(c: f64) -> CacheEconomics {
    CacheEconomics::default().with_budget(c).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solutions_are_feasible(log_c in -1.5f64..2.6) {
        let c = 10f64.powf(log_c);
        let e = econ(c);
        let n = NetworkParams::default();
        let q = QuadratureSpec::default();
        for objective in Objective::ALL {
            let s = solve(objective, &e, &n, &q).unwrap();
            prop_assert!(s.budget_spent <= c * (1.0 + 1e-12));
            prop_assert!(s.lambda_star >= e.lambda_min() && s.lambda_star <= e.lambda_max());
            prop_assert!(s.s_star >= 0.0 && s.s_star <= e.s_max());
            prop_assert!(s.objective_value > 0.0);
            let again = objective_value(objective, &e, &n, s.lambda_star, s.s_star, &q).unwrap();
            prop_assert_eq!(again, s.objective_value);
            // All budget spent unless the whole box is affordable.
            let all_max = e.cost(e.lambda_max(), e.s_max());
            prop_assert_eq!(s.binding.contains(Binding::BUDGET), all_max > c);
        }
    }

    #[test]
    fn closed_forms_beat_the_budget_line_grid(log_c in -1.5f64..1.5) {
        let e = econ(10f64.powf(log_c));
        let n = NetworkParams::default();
        let q = QuadratureSpec::default();
        for objective in Objective::ALL {
            let closed = solve(objective, &e, &n, &q).unwrap();
            let grid = grid_verify(objective, &e, &n, 64, &q).unwrap();
            prop_assert!(closed.objective_value >= grid.objective_value * (1.0 - 1e-12),
                "{:?}: {:?} vs {:?}", objective, closed, grid);
        }
    }

    #[test]
    fn feasible_curve_stays_on_budget(log_c in -1.5f64..2.6, n_points in 2usize..200) {
        let c = 10f64.powf(log_c);
        let e = econ(c);
        let curve = feasible_curve(&e, n_points).unwrap();
        prop_assert_eq!(curve.points.len(), n_points);
        let (lo, hi) = feasible_interval(&e).unwrap();
        prop_assert_eq!(curve.points[0].0, lo);
        prop_assert_eq!(curve.points[n_points - 1].0, hi);
        for &(l, s) in &curve.points {
            prop_assert_eq!(s, storage_on_budget(&e, l));
            prop_assert!(e.cost(l, s) <= c * (1.0 + 1e-12));
        }
    }

    #[test]
    fn budget_below_minimum_is_infeasible(fraction in 0.01f64..0.99) {
        let e = econ(250.0 * 1e-4 * fraction);
        prop_assert!(
            matches!(feasible_curve(&e, 8), Err(Error::Infeasible { .. })),
            "expected an infeasible budget"
        );
    }
}

#[test]
fn optimum_lies_on_the_budget_line() {
    let n = NetworkParams::default();
    let q = QuadratureSpec::default();
    for c in [1.0, 2.5, 5.0] {
        let e = econ(c);
        for objective in Objective::ALL {
            let closed = solve(objective, &e, &n, &q).unwrap();
            let boxed = grid_verify_box(objective, &e, &n, 48, &q).unwrap();
            assert!(
                closed.objective_value >= boxed.objective_value * (1.0 - 1e-12),
                "c={c} {objective:?}: {closed:?} vs {boxed:?}"
            );
        }
    }
}

#[test]
fn grid_search_converges_to_closed_forms() {
    // The closed-form optima sit at the ends of the budget line, which the
    // log grid hits exactly.
    let n = NetworkParams::default();
    let q = QuadratureSpec::default();
    for c in [1.0, 2.5, 5.0] {
        let e = econ(c);
        for objective in Objective::ALL {
            let closed = solve(objective, &e, &n, &q).unwrap();
            let grid = grid_verify(objective, &e, &n, 512, &q).unwrap();
            assert_eq!(grid.lambda_star, closed.lambda_star, "c={c} {objective:?}");
            let rel = (grid.objective_value - closed.objective_value).abs() / closed.objective_value;
            assert!(rel <= 1e-6);
        }
    }
}

#[test]
fn objectives_map_to_policies() {
    assert_eq!(Objective::ase(Association::Static), Objective::AseStatic);
    assert_eq!(Objective::ee(Association::Dynamic), Objective::EeDynamic);
    assert!(Objective::EeStatic.is_energy_efficiency());
    assert!(!Objective::AseDynamic.is_energy_efficiency());
    assert_eq!(Objective::AseDynamic.association(), Association::Dynamic);
}
