//! Multi-threaded Monte Carlo.
//!
//! Blocks of trials run on the rayon pool and are merged in block order, so
//! every result is bit-identical to the sequential estimators in
//! `cachenet_core::montecarlo` whatever the thread count.

use cachenet_core::montecarlo::{self, CurveEstimate, CurveTally, Tally};
use cachenet_core::{NetworkParams, Result, SimulationSpec, SuccessEstimate};
use rayon::prelude::*;

pub fn estimate_success(params: &NetworkParams, p_hit: f64, spec: &SimulationSpec) -> Result<SuccessEstimate> {
    let tallies = (0..spec.blocks())
        .into_par_iter()
        .map(|block| montecarlo::simulate_block(params, p_hit, spec, block))
        .collect::<Result<Vec<Tally>>>()?;
    let total = tallies.into_iter().fold(Tally::default(), Tally::merge);
    Ok(total.estimate(spec.estimator()))
}

pub fn estimate_curve(params: &NetworkParams, p_hits: &[f64], spec: &SimulationSpec) -> Result<CurveEstimate> {
    let tallies = (0..spec.blocks())
        .into_par_iter()
        .map(|block| montecarlo::simulate_curve_block(params, p_hits, spec, block))
        .collect::<Result<Vec<CurveTally>>>()?;
    let mut blocks = tallies.into_iter();
    let first = blocks.next().expect("at least one block");
    Ok(blocks.fold(first, CurveTally::merge).estimate(p_hits))
}
