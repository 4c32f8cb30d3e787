use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong while building a model or evaluating it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A scalar input violates the constraint of the quantity it names.
    #[error("{name} = {value} violates {requirement}")]
    Domain {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    /// Cache-miss delivery must cost at least as much energy as a hit.
    #[error("e_miss = {e_miss} J is below e_hit = {e_hit} J; a miss must cost at least a hit")]
    EnergyOrdering { e_hit: f64, e_miss: f64 },

    /// The budget cannot pay for the cheapest admissible deployment.
    #[error("budget {budget} $/m² cannot cover the minimum deployment cost {minimum_cost} $/m²")]
    Infeasible { budget: f64, minimum_cost: f64 },

    /// Node doubling ran out before the trapezoidal estimate settled.
    #[error("quadrature did not converge with {nodes} nodes: last {last}, previous {previous}")]
    NoConvergence { nodes: usize, last: f64, previous: f64 },

    /// Energy efficiency is undefined without energy consumption.
    #[error("area energy consumption is zero; energy efficiency is undefined")]
    ZeroConsumption,
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, requirement: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            requirement,
        }
    }
}

/// Rejects `value` unless `ok` holds; NaN never passes a comparison so it is
/// rejected by every check built on this.
pub(crate) fn ensure(ok: bool, name: &'static str, value: f64, requirement: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::domain(name, value, requirement))
    }
}
