//! Network and caching parameters plus the elementary functions shared by
//! the analytic evaluators, the simulator and the optimizer.

use core::f64::consts::PI;

use crate::error::{ensure, Error, Result};

/// Association of a user terminal with the network tiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Association {
    /// Served by its small cell on orthogonal half resources; a miss is
    /// fetched over the backhaul hop first.
    Static,
    /// Served by the small cell on a hit and directly by the backhaul node on
    /// a miss, on the full resource.
    Dynamic,
}

impl Association {
    pub const ALL: [Association; 2] = [Association::Static, Association::Dynamic];

    /// Share of the time-frequency resource carrying the access link.
    pub fn resource_factor(self) -> f64 {
        match self {
            Association::Static => 0.5,
            Association::Dynamic => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Association::Static => "static",
            Association::Dynamic => "dynamic",
        }
    }
}

/// Physical layer configuration of the two-tier network.
///
/// Built through [`NetworkParams::builder`]; every instance satisfies
/// `alpha > 2`, `beta_bh > beta_ut > 0`, strictly positive density and powers,
/// `sigma2 >= 0` and `theta >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkParams {
    lambda: f64,
    alpha: f64,
    theta: f64,
    sigma2: f64,
    rho_sc: f64,
    rho_bh: f64,
    beta_ut: f64,
    beta_bh: f64,
}

impl Default for NetworkParams {
    fn default() -> Self {
        NetworkParams::builder()
            .build()
            .expect("reference parameters are valid")
    }
}

impl NetworkParams {
    /// Builder initialised with the reference evaluation point:
    /// λ = 0.01 SCs/m², α = 4, θ = 1, σ² = 0, ρ_SC = 0.5 W, ρ_BH = 1 W,
    /// β_UT = 0.5, β_BH = 1.
    pub fn builder() -> NetworkParamsBuilder {
        NetworkParamsBuilder::default()
    }

    /// Returns a builder pre-filled with these values.
    pub fn to_builder(&self) -> NetworkParamsBuilder {
        NetworkParamsBuilder {
            lambda: self.lambda,
            alpha: self.alpha,
            theta: self.theta,
            sigma2: self.sigma2,
            rho_sc: self.rho_sc,
            rho_bh: self.rho_bh,
            beta_ut: self.beta_ut,
            beta_bh: self.beta_bh,
        }
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        self.to_builder().lambda(lambda).build()
    }

    pub fn with_theta(&self, theta: f64) -> Result<Self> {
        self.to_builder().theta(theta).build()
    }

    /// SC density in SCs/m².
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    /// Linear SINR threshold.
    pub fn theta(&self) -> f64 {
        self.theta
    }
    /// Noise power in W.
    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }
    pub fn rho_sc(&self) -> f64 {
        self.rho_sc
    }
    pub fn rho_bh(&self) -> f64 {
        self.rho_bh
    }
    pub fn beta_ut(&self) -> f64 {
        self.beta_ut
    }
    pub fn beta_bh(&self) -> f64 {
        self.beta_bh
    }

    /// Link distances at the configured density.
    pub fn geometry(&self) -> LinkGeometry {
        let half_spacing = 0.5 / libm::sqrt(self.lambda);
        LinkGeometry {
            r_ut: self.beta_ut * half_spacing,
            r_bh: self.beta_bh * half_spacing,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkParamsBuilder {
    lambda: f64,
    alpha: f64,
    theta: f64,
    sigma2: f64,
    rho_sc: f64,
    rho_bh: f64,
    beta_ut: f64,
    beta_bh: f64,
}

impl Default for NetworkParamsBuilder {
    fn default() -> Self {
        NetworkParamsBuilder {
            lambda: 1e-2,
            alpha: 4.0,
            theta: 1.0,
            sigma2: 0.0,
            rho_sc: 0.5,
            rho_bh: 1.0,
            beta_ut: 0.5,
            beta_bh: 1.0,
        }
    }
}

impl NetworkParamsBuilder {
    pub fn lambda(mut self, v: f64) -> Self {
        self.lambda = v;
        self
    }
    pub fn alpha(mut self, v: f64) -> Self {
        self.alpha = v;
        self
    }
    pub fn theta(mut self, v: f64) -> Self {
        self.theta = v;
        self
    }
    pub fn sigma2(mut self, v: f64) -> Self {
        self.sigma2 = v;
        self
    }
    pub fn rho_sc(mut self, v: f64) -> Self {
        self.rho_sc = v;
        self
    }
    pub fn rho_bh(mut self, v: f64) -> Self {
        self.rho_bh = v;
        self
    }
    pub fn beta_ut(mut self, v: f64) -> Self {
        self.beta_ut = v;
        self
    }
    pub fn beta_bh(mut self, v: f64) -> Self {
        self.beta_bh = v;
        self
    }

    pub fn build(self) -> Result<NetworkParams> {
        let b = self;
        ensure(finite_positive(b.lambda), "lambda", b.lambda, "lambda > 0")?;
        ensure(b.alpha > 2.0 && b.alpha.is_finite(), "alpha", b.alpha, "alpha > 2")?;
        ensure(b.theta >= 0.0 && b.theta.is_finite(), "theta", b.theta, "theta >= 0")?;
        ensure(
            b.sigma2 >= 0.0 && b.sigma2.is_finite(),
            "sigma2",
            b.sigma2,
            "sigma2 >= 0",
        )?;
        ensure(finite_positive(b.rho_sc), "rho_sc", b.rho_sc, "rho_sc > 0")?;
        ensure(finite_positive(b.rho_bh), "rho_bh", b.rho_bh, "rho_bh > 0")?;
        ensure(finite_positive(b.beta_ut), "beta_ut", b.beta_ut, "beta_ut > 0")?;
        ensure(
            b.beta_bh > b.beta_ut && b.beta_bh.is_finite(),
            "beta_bh",
            b.beta_bh,
            "beta_bh > beta_ut",
        )?;
        Ok(NetworkParams {
            lambda: b.lambda,
            alpha: b.alpha,
            theta: b.theta,
            sigma2: b.sigma2,
            rho_sc: b.rho_sc,
            rho_bh: b.rho_bh,
            beta_ut: b.beta_ut,
            beta_bh: b.beta_bh,
        })
    }
}

/// Catalog, storage, energy and pricing parameters of the deployment problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CacheEconomics {
    catalog_size: u64,
    storage_size: f64,
    s_max: f64,
    lambda_min: f64,
    lambda_max: f64,
    price_sc: f64,
    price_storage: f64,
    budget: f64,
    e_hit: f64,
    e_miss: f64,
}

impl Default for CacheEconomics {
    fn default() -> Self {
        CacheEconomics::builder()
            .build()
            .expect("reference economics are valid")
    }
}

impl CacheEconomics {
    /// Builder initialised with the reference deployment: F = 10⁷ files,
    /// S = 0, S_max = 5·10⁶ files/SC, λ ∈ [10⁻⁴, 10⁻²] SCs/m²,
    /// p_λ = 250 $/SC, p_S = 0.005 $/file, c = 1 $/m², E_hit = 1 J,
    /// E_miss = 10 J.
    pub fn builder() -> CacheEconomicsBuilder {
        CacheEconomicsBuilder::default()
    }

    pub fn to_builder(&self) -> CacheEconomicsBuilder {
        CacheEconomicsBuilder {
            catalog_size: self.catalog_size,
            storage_size: self.storage_size,
            s_max: self.s_max,
            lambda_min: self.lambda_min,
            lambda_max: self.lambda_max,
            price_sc: self.price_sc,
            price_storage: self.price_storage,
            budget: self.budget,
            e_hit: self.e_hit,
            e_miss: self.e_miss,
        }
    }

    pub fn with_budget(&self, budget: f64) -> Result<Self> {
        self.to_builder().budget(budget).build()
    }

    pub fn with_storage_size(&self, storage_size: f64) -> Result<Self> {
        self.to_builder().storage_size(storage_size).build()
    }

    pub fn catalog_size(&self) -> u64 {
        self.catalog_size
    }
    pub fn storage_size(&self) -> f64 {
        self.storage_size
    }
    pub fn s_max(&self) -> f64 {
        self.s_max
    }
    pub fn lambda_min(&self) -> f64 {
        self.lambda_min
    }
    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }
    pub fn price_sc(&self) -> f64 {
        self.price_sc
    }
    pub fn price_storage(&self) -> f64 {
        self.price_storage
    }
    pub fn budget(&self) -> f64 {
        self.budget
    }
    pub fn e_hit(&self) -> f64 {
        self.e_hit
    }
    pub fn e_miss(&self) -> f64 {
        self.e_miss
    }

    /// Hit probability of the configured storage size.
    pub fn hit_probability(&self) -> f64 {
        self.storage_size / self.catalog_size as f64
    }

    /// Deployment cost per m² of density `lambda` with `storage` files per SC.
    pub fn cost(&self, lambda: f64, storage: f64) -> f64 {
        self.price_sc * lambda + self.price_storage * lambda * storage
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CacheEconomicsBuilder {
    catalog_size: u64,
    storage_size: f64,
    s_max: f64,
    lambda_min: f64,
    lambda_max: f64,
    price_sc: f64,
    price_storage: f64,
    budget: f64,
    e_hit: f64,
    e_miss: f64,
}

impl Default for CacheEconomicsBuilder {
    fn default() -> Self {
        CacheEconomicsBuilder {
            catalog_size: 10_000_000,
            storage_size: 0.0,
            s_max: 5e6,
            lambda_min: 1e-4,
            lambda_max: 1e-2,
            price_sc: 250.0,
            price_storage: 0.005,
            budget: 1.0,
            e_hit: 1.0,
            e_miss: 10.0,
        }
    }
}

impl CacheEconomicsBuilder {
    pub fn catalog_size(mut self, v: u64) -> Self {
        self.catalog_size = v;
        self
    }
    pub fn storage_size(mut self, v: f64) -> Self {
        self.storage_size = v;
        self
    }
    pub fn s_max(mut self, v: f64) -> Self {
        self.s_max = v;
        self
    }
    pub fn lambda_min(mut self, v: f64) -> Self {
        self.lambda_min = v;
        self
    }
    pub fn lambda_max(mut self, v: f64) -> Self {
        self.lambda_max = v;
        self
    }
    pub fn price_sc(mut self, v: f64) -> Self {
        self.price_sc = v;
        self
    }
    pub fn price_storage(mut self, v: f64) -> Self {
        self.price_storage = v;
        self
    }
    pub fn budget(mut self, v: f64) -> Self {
        self.budget = v;
        self
    }
    pub fn e_hit(mut self, v: f64) -> Self {
        self.e_hit = v;
        self
    }
    pub fn e_miss(mut self, v: f64) -> Self {
        self.e_miss = v;
        self
    }

    pub fn build(self) -> Result<CacheEconomics> {
        let b = self;
        let f = b.catalog_size as f64;
        ensure(b.catalog_size >= 1, "catalog_size", f, "catalog_size >= 1")?;
        ensure(
            b.s_max >= 0.0 && b.s_max <= f,
            "s_max",
            b.s_max,
            "0 <= s_max <= catalog_size",
        )?;
        ensure(
            b.storage_size >= 0.0 && b.storage_size <= b.s_max,
            "storage_size",
            b.storage_size,
            "0 <= storage_size <= s_max",
        )?;
        ensure(
            finite_positive(b.lambda_min),
            "lambda_min",
            b.lambda_min,
            "lambda_min > 0",
        )?;
        ensure(
            b.lambda_max >= b.lambda_min && b.lambda_max.is_finite(),
            "lambda_max",
            b.lambda_max,
            "lambda_max >= lambda_min",
        )?;
        ensure(finite_positive(b.price_sc), "price_sc", b.price_sc, "price_sc > 0")?;
        ensure(
            finite_positive(b.price_storage),
            "price_storage",
            b.price_storage,
            "price_storage > 0",
        )?;
        ensure(finite_positive(b.budget), "budget", b.budget, "budget > 0")?;
        ensure(b.e_hit >= 0.0 && b.e_hit.is_finite(), "e_hit", b.e_hit, "e_hit >= 0")?;
        if !b.e_miss.is_finite() {
            return Err(Error::domain("e_miss", b.e_miss, "e_miss finite"));
        }
        if b.e_miss < b.e_hit {
            return Err(Error::EnergyOrdering {
                e_hit: b.e_hit,
                e_miss: b.e_miss,
            });
        }
        Ok(CacheEconomics {
            catalog_size: b.catalog_size,
            storage_size: b.storage_size,
            s_max: b.s_max,
            lambda_min: b.lambda_min,
            lambda_max: b.lambda_max,
            price_sc: b.price_sc,
            price_storage: b.price_storage,
            budget: b.budget,
            e_hit: b.e_hit,
            e_miss: b.e_miss,
        })
    }
}

/// Fixed serving-link distances in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry {
    r_ut: f64,
    r_bh: f64,
}

impl LinkGeometry {
    pub fn new(r_ut: f64, r_bh: f64) -> Result<Self> {
        ensure(finite_positive(r_ut), "r_ut", r_ut, "r_ut > 0")?;
        ensure(r_bh > r_ut && r_bh.is_finite(), "r_bh", r_bh, "r_bh > r_ut")?;
        Ok(LinkGeometry { r_ut, r_bh })
    }

    /// SC → UT distance.
    pub fn r_ut(&self) -> f64 {
        self.r_ut
    }

    /// BH → SC distance.
    pub fn r_bh(&self) -> f64 {
        self.r_bh
    }
}

/// Pathloss integral `π z^{2/α} csc(2π/α) / α`.
pub fn upsilon(z: f64, alpha: f64) -> Result<f64> {
    ensure(alpha > 2.0, "alpha", alpha, "alpha > 2")?;
    ensure(z >= 0.0, "z", z, "z >= 0")?;
    Ok(upsilon_unchecked(z, alpha))
}

#[inline]
pub(crate) fn upsilon_unchecked(z: f64, alpha: f64) -> f64 {
    PI * libm::pow(z, 2.0 / alpha) / (alpha * libm::sin(2.0 * PI / alpha))
}

/// Serving-link distances `β/(2√λ)` for a PPP of density `lambda`.
pub fn link_distances(lambda: f64, beta_ut: f64, beta_bh: f64) -> Result<LinkGeometry> {
    ensure(finite_positive(lambda), "lambda", lambda, "lambda > 0")?;
    ensure(finite_positive(beta_ut), "beta_ut", beta_ut, "beta_ut > 0")?;
    ensure(beta_bh > beta_ut, "beta_bh", beta_bh, "beta_bh > beta_ut")?;
    let half_spacing = 0.5 / libm::sqrt(lambda);
    LinkGeometry::new(beta_ut * half_spacing, beta_bh * half_spacing)
}

/// Hit probability `S/F` under uniform file popularity.
pub fn hit_probability(storage: f64, catalog: u64) -> Result<f64> {
    ensure(catalog >= 1, "catalog_size", catalog as f64, "catalog_size >= 1")?;
    ensure(
        storage >= 0.0 && storage <= catalog as f64,
        "storage_size",
        storage,
        "0 <= storage_size <= catalog_size",
    )?;
    Ok(storage / catalog as f64)
}

/// Expected energy in J to deliver one file to a UT.
pub fn total_energy(storage: f64, catalog: u64, e_hit: f64, e_miss: f64) -> Result<f64> {
    let p_hit = hit_probability(storage, catalog)?;
    ensure(e_hit >= 0.0, "e_hit", e_hit, "e_hit >= 0")?;
    ensure(e_miss >= 0.0, "e_miss", e_miss, "e_miss >= 0")?;
    Ok(p_hit * e_hit + (1.0 - p_hit) * e_miss)
}

/// Rounds a continuous storage size to whole files. The optimizers never
/// call this; it is for reporting a deployable configuration.
pub fn round_storage(storage: f64) -> u64 {
    if storage <= 0.0 {
        0
    } else {
        libm::round(storage) as u64
    }
}

fn finite_positive(v: f64) -> bool {
    v > 0.0 && v.is_finite()
}
