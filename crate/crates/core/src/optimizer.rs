//! Budget-constrained choice of SC density λ and storage size S.
//!
//! Both problems maximise a metric subject to `p_λ λ + p_S λ S <= c` and box
//! bounds on λ and S. ASE grows with λ along the budget line, so the ASE
//! problem spends on density first; EE falls with λ, so the EE problem
//! spends on storage first. [`grid_verify`] searches the budget line by
//! brute force as an independent check of both closed forms.

use alloc::vec::Vec;

use bitflags::bitflags;

use crate::analytic::{self, Policy};
use crate::error::{ensure, Error, Result};
use crate::model::{Association, CacheEconomics, NetworkParams};
use crate::quadrature::QuadratureSpec;

/// Relative slack used to decide whether a constraint is active.
const ACTIVE_TOLERANCE: f64 = 1e-9;

bitflags! {
    /// Constraints active at a solution.
    #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
    pub struct Binding: u8 {
        const BUDGET = 1 << 0;
        const LAMBDA_MIN = 1 << 1;
        const LAMBDA_MAX = 1 << 2;
        const S_MAX = 1 << 3;
        const S_NONNEG = 1 << 4;
    }
}

impl Binding {
    pub fn names(self) -> Vec<&'static str> {
        let mut out = Vec::new();
        for (flag, name) in [
            (Binding::BUDGET, "budget"),
            (Binding::LAMBDA_MIN, "lambda_min"),
            (Binding::LAMBDA_MAX, "lambda_max"),
            (Binding::S_MAX, "s_max"),
            (Binding::S_NONNEG, "s_nonneg"),
        ] {
            if self.contains(flag) {
                out.push(name);
            }
        }
        out
    }
}

/// Metric being maximised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    AseStatic,
    AseDynamic,
    EeStatic,
    EeDynamic,
}

impl Objective {
    pub const ALL: [Objective; 4] = [
        Objective::AseStatic,
        Objective::AseDynamic,
        Objective::EeStatic,
        Objective::EeDynamic,
    ];

    pub fn ase(association: Association) -> Self {
        match association {
            Association::Static => Objective::AseStatic,
            Association::Dynamic => Objective::AseDynamic,
        }
    }

    pub fn ee(association: Association) -> Self {
        match association {
            Association::Static => Objective::EeStatic,
            Association::Dynamic => Objective::EeDynamic,
        }
    }

    pub fn association(self) -> Association {
        match self {
            Objective::AseStatic | Objective::EeStatic => Association::Static,
            Objective::AseDynamic | Objective::EeDynamic => Association::Dynamic,
        }
    }

    pub fn is_energy_efficiency(self) -> bool {
        matches!(self, Objective::EeStatic | Objective::EeDynamic)
    }

    pub fn name(self) -> &'static str {
        match self {
            Objective::AseStatic => "ase_static",
            Objective::AseDynamic => "ase_dynamic",
            Objective::EeStatic => "ee_static",
            Objective::EeDynamic => "ee_dynamic",
        }
    }
}

/// An optimizer answer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeploymentSolution {
    pub lambda_star: f64,
    pub s_star: f64,
    /// bps/Hz/m² for ASE objectives, bit/J for EE objectives.
    pub objective_value: f64,
    /// $/m²
    pub budget_spent: f64,
    pub binding: Binding,
}

/// Samples of the budget-equality locus `S(λ)` inside the box.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibleCurve {
    pub budget: f64,
    pub points: Vec<(f64, f64)>,
}

/// Storage that exhausts the budget at density `lambda`, clamped to
/// `[0, S_max]`.
pub fn storage_on_budget(econ: &CacheEconomics, lambda: f64) -> f64 {
    let residual = econ.budget() / lambda - econ.price_sc();
    // 1/0.004 is not exactly 250 in binary; treat rounding residue as zero.
    if residual.abs() <= 1e-12 * econ.price_sc() {
        return 0.0;
    }
    (residual / econ.price_storage()).clamp(0.0, econ.s_max())
}

/// Density range on which the budget line meets the box.
///
/// Returns `(λ_lo, λ_hi)`; when even the all-maximum deployment fits inside
/// the budget the range collapses to `(λ_max, λ_max)`.
pub fn feasible_interval(econ: &CacheEconomics) -> Result<(f64, f64)> {
    let c = econ.budget();
    let minimum_cost = econ.price_sc() * econ.lambda_min();
    if c < minimum_cost * (1.0 - 1e-12) {
        return Err(Error::Infeasible {
            budget: c,
            minimum_cost,
        });
    }
    let hi = econ.lambda_max().min(c / econ.price_sc()).max(econ.lambda_min());
    let lo = econ
        .lambda_min()
        .max(c / (econ.price_sc() + econ.price_storage() * econ.s_max()));
    Ok((lo.min(hi), hi))
}

/// `n_points` log-spaced samples of the budget-equality curve.
pub fn feasible_curve(econ: &CacheEconomics, n_points: usize) -> Result<FeasibleCurve> {
    ensure(n_points >= 2, "n_points", n_points as f64, "n_points >= 2")?;
    let (lo, hi) = feasible_interval(econ)?;
    let points = log_space(lo, hi, n_points)
        .map(|lambda| (lambda, storage_on_budget(econ, lambda)))
        .collect();
    Ok(FeasibleCurve {
        budget: econ.budget(),
        points,
    })
}

/// Value of `objective` at `(lambda, storage)`.
pub fn objective_value(
    objective: Objective,
    econ: &CacheEconomics,
    params: &NetworkParams,
    lambda: f64,
    storage: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let params = params.with_lambda(lambda)?;
    let point = econ.with_storage_size(storage)?;
    let policy = Policy::from(objective.association());
    if objective.is_energy_efficiency() {
        analytic::energy_efficiency(policy, &params, &point, quad)
    } else {
        analytic::ase(policy, &params, point.hit_probability(), quad)
    }
}

/// Closed-form maximiser of ASE: `λ* = min(c/p_λ, λ_max)` and the remaining
/// budget goes to storage (clamped to `S_max`).
pub fn solve_p1(
    econ: &CacheEconomics,
    params: &NetworkParams,
    association: Association,
    quad: &QuadratureSpec,
) -> Result<DeploymentSolution> {
    feasible_interval(econ)?;
    let lambda = (econ.budget() / econ.price_sc()).min(econ.lambda_max());
    let storage = storage_on_budget(econ, lambda);
    solution(Objective::ase(association), econ, params, lambda, storage, quad)
}

/// Closed-form maximiser of EE: storage first,
/// `S* = min((c/λ_min − p_λ)/p_S, S_max)`, then `λ* = c/(p_λ + p_S S*)`.
pub fn solve_p2(
    econ: &CacheEconomics,
    params: &NetworkParams,
    association: Association,
    quad: &QuadratureSpec,
) -> Result<DeploymentSolution> {
    feasible_interval(econ)?;
    let storage = storage_on_budget(econ, econ.lambda_min());
    let mut lambda = econ.budget() / (econ.price_sc() + econ.price_storage() * storage);
    if (lambda - econ.lambda_min()).abs() <= 1e-12 * econ.lambda_min() {
        lambda = econ.lambda_min();
    }
    // All-maximum deployment already affordable.
    let lambda = lambda.min(econ.lambda_max());
    solution(Objective::ee(association), econ, params, lambda, storage, quad)
}

/// Closed form for the problem that matches `objective`.
pub fn solve(
    objective: Objective,
    econ: &CacheEconomics,
    params: &NetworkParams,
    quad: &QuadratureSpec,
) -> Result<DeploymentSolution> {
    if objective.is_energy_efficiency() {
        solve_p2(econ, params, objective.association(), quad)
    } else {
        solve_p1(econ, params, objective.association(), quad)
    }
}

/// Best of `resolution` log-spaced points on the budget-equality curve.
/// Ties go to the smaller density.
pub fn grid_verify(
    objective: Objective,
    econ: &CacheEconomics,
    params: &NetworkParams,
    resolution: usize,
    quad: &QuadratureSpec,
) -> Result<DeploymentSolution> {
    ensure(resolution >= 16, "resolution", resolution as f64, "resolution >= 16")?;
    let curve = feasible_curve(econ, resolution)?;
    let mut best: Option<(f64, f64, f64)> = None;
    for &(lambda, storage) in &curve.points {
        let value = objective_value(objective, econ, params, lambda, storage, quad)?;
        if best.is_none_or(|(_, _, v)| value > v) {
            best = Some((lambda, storage, value));
        }
    }
    let (lambda, storage, _) = best.expect("curve has at least two points");
    solution(objective, econ, params, lambda, storage, quad)
}

/// Exhaustive search over the whole box (log-spaced λ, linear S), keeping
/// every point within budget. Audits the assumption that the optimum lies
/// on the budget line.
pub fn grid_verify_box(
    objective: Objective,
    econ: &CacheEconomics,
    params: &NetworkParams,
    resolution: usize,
    quad: &QuadratureSpec,
) -> Result<DeploymentSolution> {
    ensure(resolution >= 16, "resolution", resolution as f64, "resolution >= 16")?;
    feasible_interval(econ)?;
    let limit = econ.budget() * (1.0 + 1e-12);
    let mut best: Option<(f64, f64, f64)> = None;
    for lambda in log_space(econ.lambda_min(), econ.lambda_max(), resolution) {
        for k in 0..resolution {
            let storage = econ.s_max() * k as f64 / (resolution - 1) as f64;
            if econ.cost(lambda, storage) > limit {
                break;
            }
            let value = objective_value(objective, econ, params, lambda, storage, quad)?;
            if best.is_none_or(|(_, _, v)| value > v) {
                best = Some((lambda, storage, value));
            }
        }
    }
    let (lambda, storage, _) = best.expect("λ_min with no storage is affordable");
    solution(objective, econ, params, lambda, storage, quad)
}

fn solution(
    objective: Objective,
    econ: &CacheEconomics,
    params: &NetworkParams,
    lambda: f64,
    storage: f64,
    quad: &QuadratureSpec,
) -> Result<DeploymentSolution> {
    let objective_value = objective_value(objective, econ, params, lambda, storage, quad)?;
    let budget_spent = econ.cost(lambda, storage);
    let close = |a: f64, b: f64| (a - b).abs() <= ACTIVE_TOLERANCE * b.abs().max(f64::MIN_POSITIVE);
    let mut binding = Binding::empty();
    binding.set(Binding::BUDGET, close(budget_spent, econ.budget()));
    binding.set(Binding::LAMBDA_MIN, close(lambda, econ.lambda_min()));
    binding.set(Binding::LAMBDA_MAX, close(lambda, econ.lambda_max()));
    binding.set(Binding::S_MAX, close(storage, econ.s_max()));
    binding.set(Binding::S_NONNEG, storage == 0.0);
    Ok(DeploymentSolution {
        lambda_star: lambda,
        s_star: storage,
        objective_value,
        budget_spent,
        binding,
    })
}

/// `n` log-spaced values from `lo` to `hi` with both ends exact.
pub fn log_space(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let ratio = libm::log(hi / lo);
    (0..n).map(move |i| {
        if i == 0 {
            lo
        } else if i + 1 == n {
            hi
        } else {
            lo * libm::exp(ratio * i as f64 / (n - 1) as f64)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn econ(c: f64) -> CacheEconomics {
        CacheEconomics::default().with_budget(c).unwrap()
    }

    #[test]
    fn curve_examples() {
        let curve = feasible_curve(&econ(1.0), 16).unwrap();
        let (l0, s0) = curve.points[0];
        let (l1, s1) = *curve.points.last().unwrap();
        assert_relative_eq!(l0, 1e-4, max_relative = 1e-15);
        assert_relative_eq!(s0, 1.95e6, max_relative = 1e-12);
        assert_relative_eq!(l1, 4e-3, max_relative = 1e-15);
        assert_eq!(s1, 0.0);

        let curve = feasible_curve(&econ(5.0), 16).unwrap();
        let (l, s) = *curve.points.last().unwrap();
        assert_eq!(l, 1e-2);
        assert_relative_eq!(s, 5e4, max_relative = 1e-12);
        assert_relative_eq!(curve.points[0].0, 5.0 / 25_250.0, max_relative = 1e-15);
        assert_eq!(curve.points[0].1, 5e6);
    }

    #[test]
    fn curve_is_monotone_and_on_budget() {
        for c in [1.0, 2.5, 5.0] {
            let e = econ(c);
            let curve = feasible_curve(&e, 64).unwrap();
            for w in curve.points.windows(2) {
                assert!(w[1].0 > w[0].0);
                assert!(w[1].1 <= w[0].1);
            }
            for &(l, s) in &curve.points {
                assert_relative_eq!(e.cost(l, s), c, max_relative = 1e-9);
                assert!((1e-4..=1e-2).contains(&l));
                assert!((0.0..=5e6).contains(&s));
            }
        }
    }

    #[test]
    fn infeasible_budget() {
        let e = econ(0.01);
        assert!(matches!(feasible_curve(&e, 8), Err(Error::Infeasible { .. })));
        let q = QuadratureSpec::default();
        let p = NetworkParams::default();
        assert!(matches!(
            solve_p1(&e, &p, Association::Dynamic, &q),
            Err(Error::Infeasible { .. })
        ));
        assert!(matches!(
            solve_p2(&e, &p, Association::Static, &q),
            Err(Error::Infeasible { .. })
        ));
        assert!(feasible_curve(&econ(1.0), 1).is_err());
    }

    #[test]
    fn p1_examples() {
        let q = QuadratureSpec::default();
        let p = NetworkParams::default();
        let s = solve_p1(&econ(1.0), &p, Association::Dynamic, &q).unwrap();
        assert_relative_eq!(s.lambda_star, 4e-3, max_relative = 1e-15);
        assert_eq!(s.s_star, 0.0);
        assert!(s.binding.contains(Binding::BUDGET | Binding::S_NONNEG));
        let s = solve_p1(&econ(5.0), &p, Association::Dynamic, &q).unwrap();
        assert_eq!(s.lambda_star, 1e-2);
        assert_relative_eq!(s.s_star, 5e4, max_relative = 1e-12);
        assert!(s.binding.contains(Binding::BUDGET | Binding::LAMBDA_MAX));
        let s = solve_p1(&econ(2.5), &p, Association::Static, &q).unwrap();
        assert_eq!(s.lambda_star, 1e-2);
        assert_eq!(s.s_star, 0.0);
    }

    #[test]
    fn p2_examples() {
        let q = QuadratureSpec::default();
        let p = NetworkParams::default();
        let s = solve_p2(&econ(1.0), &p, Association::Dynamic, &q).unwrap();
        assert_relative_eq!(s.s_star, 1.95e6, max_relative = 1e-12);
        assert_eq!(s.lambda_star, 1e-4);
        assert!(s.binding.contains(Binding::BUDGET | Binding::LAMBDA_MIN));
        let s = solve_p2(&econ(5.0), &p, Association::Dynamic, &q).unwrap();
        assert_eq!(s.s_star, 5e6);
        assert_relative_eq!(s.lambda_star, 5.0 / 25_250.0, max_relative = 1e-15);
        assert!(s.binding.contains(Binding::BUDGET | Binding::S_MAX));
        let s = solve_p2(&econ(2.5), &p, Association::Static, &q).unwrap();
        assert_relative_eq!(s.s_star, 4.95e6, max_relative = 1e-12);
        assert_eq!(s.lambda_star, 1e-4);
    }

    #[test]
    fn trivial_all_max_point() {
        let q = QuadratureSpec::default();
        let p = NetworkParams::default();
        // 250·0.01 + 0.005·0.01·5e6 = 252.5 $/m²
        let e = econ(300.0);
        for s in [
            solve_p1(&e, &p, Association::Dynamic, &q).unwrap(),
            solve_p2(&e, &p, Association::Dynamic, &q).unwrap(),
        ] {
            assert_eq!(s.lambda_star, 1e-2);
            assert_eq!(s.s_star, 5e6);
            assert!(!s.binding.contains(Binding::BUDGET));
            assert!(s.budget_spent < 300.0);
        }
        let curve = feasible_curve(&e, 4).unwrap();
        assert!(curve.points.iter().all(|&(l, s)| l == 1e-2 && s == 5e6));
    }

    #[test]
    fn binding_names() {
        let b = Binding::BUDGET | Binding::S_MAX;
        assert_eq!(b.names(), ["budget", "s_max"]);
    }

    #[test]
    fn log_space_endpoints_are_exact() {
        let v: Vec<f64> = log_space(1e-4, 4e-3, 5).collect();
        assert_eq!(v[0], 1e-4);
        assert_eq!(v[4], 4e-3);
        assert!(v.windows(2).all(|w| w[1] > w[0]));
    }
}
