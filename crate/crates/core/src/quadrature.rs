//! Trapezoidal averaging of smooth 2π-periodic integrands.
//!
//! For periodic analytic integrands the uniform trapezoid converges
//! geometrically, so doubling the node count until two successive estimates
//! agree is both cheap and reliable.

use core::f64::consts::PI;

use crate::error::{ensure, Error, Result};

/// Node-doubling schedule and stopping rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    initial_nodes: usize,
    relative_tolerance: f64,
    max_doublings: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            initial_nodes: 64,
            relative_tolerance: 1e-9,
            max_doublings: 12,
        }
    }
}

impl QuadratureSpec {
    pub fn new(initial_nodes: usize, relative_tolerance: f64, max_doublings: u32) -> Result<Self> {
        ensure(
            initial_nodes >= 8,
            "initial_nodes",
            initial_nodes as f64,
            "initial_nodes >= 8",
        )?;
        ensure(
            relative_tolerance > 0.0 && relative_tolerance < 1e-3,
            "relative_tolerance",
            relative_tolerance,
            "0 < relative_tolerance < 1e-3",
        )?;
        ensure(
            max_doublings >= 1,
            "max_doublings",
            max_doublings as f64,
            "max_doublings >= 1",
        )?;
        Ok(QuadratureSpec {
            initial_nodes,
            relative_tolerance,
            max_doublings,
        })
    }

    pub fn initial_nodes(&self) -> usize {
        self.initial_nodes
    }
    pub fn relative_tolerance(&self) -> f64 {
        self.relative_tolerance
    }
    pub fn max_doublings(&self) -> u32 {
        self.max_doublings
    }
}

/// Returns `∫₀^{2π} f(φ) dφ / 2π`.
///
/// Each doubling reuses the previous nodes and only evaluates the new
/// midpoints. Stops once `|T_2n − T_n| <= tol·mean|f|`, which is the usual
/// relative test for one-signed integrands and stays meaningful when the
/// mean itself is zero.
pub fn periodic_mean<F>(mut f: F, spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let mut n = spec.initial_nodes;
    let step = 2.0 * PI / n as f64;
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    for k in 0..n {
        let v = f(step * k as f64);
        sum += v;
        abs_sum += v.abs();
    }
    let mut estimate = sum / n as f64;
    let mut previous = estimate;

    for _ in 0..spec.max_doublings {
        let step = 2.0 * PI / n as f64;
        for k in 0..n {
            let v = f(step * (k as f64 + 0.5));
            sum += v;
            abs_sum += v.abs();
        }
        n *= 2;
        let refined = sum / n as f64;
        let scale = abs_sum / n as f64;
        if (refined - estimate).abs() <= spec.relative_tolerance * scale {
            return Ok(refined);
        }
        previous = estimate;
        estimate = refined;
    }

    Err(Error::NoConvergence {
        nodes: n,
        last: estimate,
        previous,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_trig_moments() {
        let q = QuadratureSpec::default();
        assert!((periodic_mean(|_| 3.0, &q).unwrap() - 3.0).abs() < 1e-15);
        assert!(periodic_mean(libm::cos, &q).unwrap().abs() < 1e-15);
        let m = periodic_mean(|p| libm::cos(p) * libm::cos(p), &q).unwrap();
        assert!((m - 0.5).abs() < 1e-15);
    }

    #[test]
    fn matches_bessel_series() {
        // mean of exp(b cos φ) is I₀(b); series Σ (b/2)^{2k}/(k!)²
        let b = 1.25;
        let mut term = 1.0;
        let mut i0 = 1.0;
        for k in 1..40 {
            term *= (b / 2.0) * (b / 2.0) / (k as f64 * k as f64);
            i0 += term;
        }
        let m = periodic_mean(|p| libm::exp(b * libm::cos(p)), &QuadratureSpec::default()).unwrap();
        assert!((m - i0).abs() < 1e-14 * i0);
    }

    #[test]
    fn reports_non_convergence() {
        // Discontinuous integrand with a jump not aligned to any node level.
        let spec = QuadratureSpec::new(8, 1e-12, 2).unwrap();
        let err = periodic_mean(|p| if p < 0.9 { 1.0 } else { 0.0 }, &spec).unwrap_err();
        match err {
            Error::NoConvergence { nodes, last, previous } => {
                assert_eq!(nodes, 32);
                assert!(last.is_finite() && previous.is_finite());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::new(4, 1e-9, 12).is_err());
        assert!(QuadratureSpec::new(64, 0.0, 12).is_err());
        assert!(QuadratureSpec::new(64, 1e-3, 12).is_err());
        assert!(QuadratureSpec::new(64, 1e-9, 0).is_err());
        assert_eq!(QuadratureSpec::new(64, 1e-9, 12).unwrap(), QuadratureSpec::default());
    }
}
