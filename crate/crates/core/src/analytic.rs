//! Closed-form success probability, area spectral efficiency, area energy
//! consumption and energy efficiency for both association policies.
//!
//! All interference fields are Poisson with Rayleigh fading, so each Laplace
//! transform has the form `exp(−2πλ' Υ(ρ s))` with λ' the density of the
//! (possibly thinned) interferer process. The only non-closed-form piece is
//! the average over the backhaul-node angle in the dynamic miss branch, which
//! is evaluated with [`periodic_mean`].

use crate::error::{ensure, Error, Result};
use crate::model::{upsilon_unchecked, Association, CacheEconomics, NetworkParams};
use crate::quadrature::{periodic_mean, QuadratureSpec};

/// Success-probability model used to compute a metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Policy {
    Static,
    Dynamic,
    /// Dynamic association with the angle average replaced by its worst case.
    DynamicLowerBound,
}

impl Policy {
    pub fn association(self) -> Association {
        match self {
            Policy::Static => Association::Static,
            Policy::Dynamic | Policy::DynamicLowerBound => Association::Dynamic,
        }
    }

    pub fn resource_factor(self) -> f64 {
        self.association().resource_factor()
    }
}

impl From<Association> for Policy {
    fn from(a: Association) -> Self {
        match a {
            Association::Static => Policy::Static,
            Association::Dynamic => Policy::Dynamic,
        }
    }
}

/// Per-policy performance at one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicyMetrics {
    pub policy: Policy,
    pub p_suc: f64,
    /// bps/Hz/m²
    pub ase: f64,
    /// J/m²
    pub aec: f64,
    /// bit/J
    pub ee: f64,
}

/// Laplace transform of the SC interference seen by the UT under static
/// association.
pub fn laplace_static_ut(s: f64, params: &NetworkParams) -> Result<f64> {
    check_transform_argument(s)?;
    Ok(field_laplace(params.lambda(), params.rho_sc() * s, params.alpha()))
}

/// Laplace transform of the miss-thinned BH interference seen by the SC on
/// the backhaul hop.
pub fn laplace_static_sc(s: f64, p_hit: f64, params: &NetworkParams) -> Result<f64> {
    check_transform_argument(s)?;
    check_hit(p_hit)?;
    Ok(field_laplace(
        params.lambda() * (1.0 - p_hit),
        params.rho_bh() * s,
        params.alpha(),
    ))
}

/// Laplace transform of the mixed field under dynamic association: hit SCs
/// transmit themselves, miss SCs are replaced by their BHs.
pub fn laplace_dynamic_ut(s: f64, p_hit: f64, params: &NetworkParams) -> Result<f64> {
    check_transform_argument(s)?;
    check_hit(p_hit)?;
    Ok(dynamic_laplace(s, p_hit, params))
}

/// `(r_ut² + r_bh² + 2 r_ut r_bh cos φ)^{α/2}`, the α-th power of the BH→UT
/// distance when the BH sits at angle φ around the serving SC.
pub fn omega(r_ut: f64, r_bh: f64, phi: f64, alpha: f64) -> f64 {
    let d2 = r_ut * r_ut + r_bh * r_bh + 2.0 * r_ut * r_bh * libm::cos(phi);
    libm::pow(d2, 0.5 * alpha)
}

/// Success probability under static association.
pub fn success_static(params: &NetworkParams, p_hit: f64) -> Result<f64> {
    check_hit(p_hit)?;
    if params.theta() == 0.0 {
        return Ok(1.0);
    }
    let theta = params.theta();
    let alpha = params.alpha();
    let g = params.geometry();

    let s_ut = theta * libm::pow(g.r_ut(), alpha) / params.rho_sc();
    let access = libm::exp(-s_ut * params.sigma2()) * field_laplace(params.lambda(), params.rho_sc() * s_ut, alpha);

    let s_bh = theta * libm::pow(g.r_bh(), alpha) / params.rho_bh();
    let backhaul = libm::exp(-s_bh * params.sigma2())
        * field_laplace(params.lambda() * (1.0 - p_hit), params.rho_bh() * s_bh, alpha);

    Ok(access * (p_hit + (1.0 - p_hit) * backhaul))
}

/// Success probability under dynamic association.
pub fn success_dynamic(params: &NetworkParams, p_hit: f64, quad: &QuadratureSpec) -> Result<f64> {
    check_hit(p_hit)?;
    if params.theta() == 0.0 {
        return Ok(1.0);
    }
    let hit = dynamic_hit_term(params, p_hit);
    if p_hit == 1.0 {
        return Ok(hit);
    }
    let theta = params.theta();
    let g = params.geometry();
    let alpha = params.alpha();
    let rho_bh = params.rho_bh();
    let angle_mean = periodic_mean(
        |phi| dynamic_laplace(theta * omega(g.r_ut(), g.r_bh(), phi, alpha) / rho_bh, p_hit, params),
        quad,
    )?;
    Ok(hit + (1.0 - p_hit) * dynamic_miss_noise(params) * angle_mean)
}

/// [`success_dynamic`] for α = 4 without quadrature.
///
/// With α = 4 the Laplace exponent is linear in `√Ω(φ) = a + b cos φ`, so
/// the angle average is `e^{−Ka} I₀(Kb)`.
pub fn success_dynamic_bessel(params: &NetworkParams, p_hit: f64) -> Result<f64> {
    check_hit(p_hit)?;
    let alpha = params.alpha();
    if alpha != 4.0 {
        return Err(Error::domain("alpha", alpha, "alpha == 4 for the Bessel form"));
    }
    if params.theta() == 0.0 {
        return Ok(1.0);
    }
    let hit = dynamic_hit_term(params, p_hit);
    if p_hit == 1.0 {
        return Ok(hit);
    }
    let g = params.geometry();
    let theta = params.theta();
    let lambda = params.lambda();
    // Exponent per unit √Ω: Υ(c·Ω) = Υ(c)·√Ω for α = 4.
    let k = 2.0
        * core::f64::consts::PI
        * (lambda * p_hit * upsilon_unchecked(params.rho_sc() * theta / params.rho_bh(), alpha)
            + lambda * (1.0 - p_hit) * upsilon_unchecked(theta, alpha));
    let a = g.r_ut() * g.r_ut() + g.r_bh() * g.r_bh();
    let b = 2.0 * g.r_ut() * g.r_bh();
    let angle_mean = libm::exp(-k * (a - b)) * scaled_bessel_i0(k * b);
    Ok(hit + (1.0 - p_hit) * dynamic_miss_noise(params) * angle_mean)
}

/// `e^{−x} I₀(x)` for `x >= 0`.
pub fn scaled_bessel_i0(x: f64) -> f64 {
    if x < 600.0 {
        // Power series; every term is positive so there is no cancellation.
        let q = 0.25 * x * x;
        let (mut term, mut sum, mut k) = (1.0, 1.0, 1.0);
        while term > 1e-17 * sum {
            term *= q / (k * k);
            sum += term;
            k += 1.0;
        }
        libm::exp(-x) * sum
    } else {
        // Asymptotic series Σ ((2k−1)!!)² / (k! (8x)^k).
        let (mut term, mut sum) = (1.0, 1.0);
        for k in 1..8 {
            let odd = (2 * k - 1) as f64;
            term *= odd * odd / (k as f64 * 8.0 * x);
            sum += term;
        }
        sum / libm::sqrt(2.0 * core::f64::consts::PI * x)
    }
}

/// Lower bound on [`success_dynamic`] placing the BH at the worst-case
/// distance `r_ut + r_bh` from the UT.
pub fn success_dynamic_lower_bound(params: &NetworkParams, p_hit: f64) -> Result<f64> {
    check_hit(p_hit)?;
    if params.theta() == 0.0 {
        return Ok(1.0);
    }
    let hit = dynamic_hit_term(params, p_hit);
    let g = params.geometry();
    let worst = libm::pow(g.r_ut() + g.r_bh(), params.alpha());
    let s = params.theta() * worst / params.rho_bh();
    Ok(hit + (1.0 - p_hit) * dynamic_miss_noise(params) * dynamic_laplace(s, p_hit, params))
}

pub fn success_probability(policy: Policy, params: &NetworkParams, p_hit: f64, quad: &QuadratureSpec) -> Result<f64> {
    match policy {
        Policy::Static => success_static(params, p_hit),
        Policy::Dynamic => success_dynamic(params, p_hit, quad),
        Policy::DynamicLowerBound => success_dynamic_lower_bound(params, p_hit),
    }
}

/// Area spectral efficiency in bps/Hz/m²; link distances follow the density
/// in `params`.
pub fn ase(policy: Policy, params: &NetworkParams, p_hit: f64, quad: &QuadratureSpec) -> Result<f64> {
    let p_suc = success_probability(policy, params, p_hit, quad)?;
    Ok(spectral_efficiency(policy, params, p_suc))
}

/// Area energy consumption `λ·E_tot(S)` in J/m².
pub fn aec(lambda: f64, storage: f64, econ: &CacheEconomics) -> Result<f64> {
    ensure(lambda >= 0.0 && lambda.is_finite(), "lambda", lambda, "lambda >= 0")?;
    let e_tot = crate::model::total_energy(storage, econ.catalog_size(), econ.e_hit(), econ.e_miss())?;
    Ok(lambda * e_tot)
}

/// Energy efficiency in bit/J at density `params.lambda()` and the storage
/// size held by `econ`.
pub fn energy_efficiency(
    policy: Policy,
    params: &NetworkParams,
    econ: &CacheEconomics,
    quad: &QuadratureSpec,
) -> Result<f64> {
    Ok(evaluate(policy, params, econ, quad)?.ee)
}

/// All metrics for one policy at density `params.lambda()` and storage
/// `econ.storage_size()`.
pub fn evaluate(
    policy: Policy,
    params: &NetworkParams,
    econ: &CacheEconomics,
    quad: &QuadratureSpec,
) -> Result<PolicyMetrics> {
    let p_hit = econ.hit_probability();
    let p_suc = success_probability(policy, params, p_hit, quad)?;
    let ase = spectral_efficiency(policy, params, p_suc);
    let aec = aec(params.lambda(), econ.storage_size(), econ)?;
    if aec <= 0.0 {
        return Err(Error::ZeroConsumption);
    }
    Ok(PolicyMetrics {
        policy,
        p_suc,
        ase,
        aec,
        ee: ase / aec,
    })
}

fn spectral_efficiency(policy: Policy, params: &NetworkParams, p_suc: f64) -> f64 {
    policy.resource_factor() * params.lambda() * p_suc * libm::log2(1.0 + params.theta())
}

#[inline]
fn field_laplace(density: f64, scaled_s: f64, alpha: f64) -> f64 {
    libm::exp(-2.0 * core::f64::consts::PI * density * upsilon_unchecked(scaled_s, alpha))
}

#[inline]
fn dynamic_laplace(s: f64, p_hit: f64, params: &NetworkParams) -> f64 {
    let lambda = params.lambda();
    field_laplace(lambda * p_hit, params.rho_sc() * s, params.alpha())
        * field_laplace(lambda * (1.0 - p_hit), params.rho_bh() * s, params.alpha())
}

fn dynamic_hit_term(params: &NetworkParams, p_hit: f64) -> f64 {
    let r_ut = params.geometry().r_ut();
    let s = params.theta() * libm::pow(r_ut, params.alpha()) / params.rho_sc();
    p_hit * libm::exp(-s * params.sigma2()) * dynamic_laplace(s, p_hit, params)
}

// The noise factor of the miss branch is evaluated at the BH→SC distance, as
// in the closed form; the simulator uses the actual BH→UT distance instead.
fn dynamic_miss_noise(params: &NetworkParams) -> f64 {
    let r_bh = params.geometry().r_bh();
    libm::exp(-params.theta() * params.sigma2() * libm::pow(r_bh, params.alpha()) / params.rho_bh())
}

fn check_transform_argument(s: f64) -> Result<()> {
    ensure(s >= 0.0, "s", s, "s >= 0")
}

fn check_hit(p_hit: f64) -> Result<()> {
    ensure((0.0..=1.0).contains(&p_hit), "p_hit", p_hit, "0 <= p_hit <= 1")
}
