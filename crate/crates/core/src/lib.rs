//! Performance analysis and deployment optimization of cache-aided two-tier
//! cellular networks.
//!
//! A tier of small cells (SCs) with local file caches serves user terminals
//! (UTs); cache misses are fetched from a tier of wireless backhaul nodes
//! (BHs). Nodes form a marked Poisson point process with Rayleigh fading.
//!
//! - [`model`]: parameters, link distances, hit probability, energy model.
//! - [`analytic`]: closed-form success probability, ASE, AEC and EE for
//!   static and dynamic UT association.
//! - [`montecarlo`]: independent simulation of the same quantities.
//! - [`optimizer`]: budget-constrained choice of SC density and storage.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analytic;
pub mod error;
pub mod model;
pub mod montecarlo;
pub mod optimizer;
pub mod quadrature;

pub use analytic::{Policy, PolicyMetrics};
pub use error::{Error, Result};
pub use model::{Association, CacheEconomics, LinkGeometry, NetworkParams};
pub use montecarlo::{SimulationSpec, SuccessEstimate};
pub use optimizer::{DeploymentSolution, FeasibleCurve, Objective};
pub use quadrature::QuadratureSpec;
