//! Brute-force Monte Carlo estimation of the success probability.
//!
//! Each trial samples the marked Poisson field around the typical receivers,
//! realises Rayleigh fading on every link and checks the SINR conditions
//! directly. Nothing here uses the Laplace-transform closed forms, so the
//! estimates are an independent check of [`crate::analytic`].

mod realization;
mod rng;
mod trial;

use alloc::vec::Vec;
use core::f64::consts::PI;

pub use realization::{Interferer, NetworkRealization, TypicalLink};
pub use rng::{CounterRng, StreamKey};
pub use trial::{conditional_value, evaluate_trial, MAX_CURVE_POINTS};

use crate::error::{ensure, Result};
use crate::model::{Association, NetworkParams};
use realization::{Candidate, FieldWalk, FIELD_ACCESS, FIELD_BACKHAUL, FIELD_TYPICAL};
use trial::TrialContext;

/// Trials are tallied in blocks of this many; blocks are merged in index
/// order so the result does not depend on how blocks are scheduled.
pub const BLOCK_SIZE: u64 = 4096;

/// How the backhaul hop of static association sees the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HopModel {
    /// Independent interference field per hop, matching the product form of
    /// the closed-form success probability.
    #[default]
    Independent,
    /// Both hops share interferer positions and marks; fading is fresh.
    Correlated,
}

/// Per-trial statistic averaged by the estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Estimator {
    /// Success indicator of the full SINR test.
    #[default]
    Indicator,
    /// Success probability conditioned on node positions and angles: fading,
    /// cache marks and the typical cache state are averaged exactly. Same
    /// mean as the indicator, much smaller variance, no early exit.
    Conditional,
}

/// Monte Carlo run configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationSpec {
    trials: u64,
    seed: u64,
    truncation_fraction: f64,
    policy: Association,
    hop_model: HopModel,
    estimator: Estimator,
    tail_compensation: bool,
}

impl SimulationSpec {
    pub const DEFAULT_TRUNCATION: f64 = 1e-4;

    pub fn new(policy: Association, trials: u64, seed: u64) -> Result<Self> {
        ensure(trials >= 1, "trials", trials as f64, "trials >= 1")?;
        Ok(SimulationSpec {
            trials,
            seed,
            truncation_fraction: Self::DEFAULT_TRUNCATION,
            policy,
            hop_model: HopModel::default(),
            estimator: Estimator::default(),
            tail_compensation: true,
        })
    }

    pub fn with_truncation_fraction(mut self, fraction: f64) -> Result<Self> {
        ensure(
            fraction > 0.0 && fraction < 1e-2,
            "truncation_fraction",
            fraction,
            "0 < truncation_fraction < 1e-2",
        )?;
        self.truncation_fraction = fraction;
        Ok(self)
    }

    pub fn with_hop_model(mut self, hop_model: HopModel) -> Self {
        self.hop_model = hop_model;
        self
    }

    pub fn with_estimator(mut self, estimator: Estimator) -> Self {
        self.estimator = estimator;
        self
    }

    /// Adds the mean interference from beyond the window to every SINR test
    /// (on by default). Leaves a second-order truncation error only.
    pub fn with_tail_compensation(mut self, on: bool) -> Self {
        self.tail_compensation = on;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_trials(mut self, trials: u64) -> Result<Self> {
        ensure(trials >= 1, "trials", trials as f64, "trials >= 1")?;
        self.trials = trials;
        Ok(self)
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }
    pub fn seed(&self) -> u64 {
        self.seed
    }
    pub fn truncation_fraction(&self) -> f64 {
        self.truncation_fraction
    }
    pub fn policy(&self) -> Association {
        self.policy
    }
    pub fn hop_model(&self) -> HopModel {
        self.hop_model
    }
    pub fn estimator(&self) -> Estimator {
        self.estimator
    }
    pub fn tail_compensation(&self) -> bool {
        self.tail_compensation
    }

    /// Number of tally blocks covering all trials.
    pub fn blocks(&self) -> u64 {
        self.trials.div_ceil(BLOCK_SIZE)
    }
}

/// Estimated success probability with its normal-approximation interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuccessEstimate {
    pub p_hat: f64,
    pub std_error: f64,
    pub trials: u64,
    pub ci95: (f64, f64),
}

impl SuccessEstimate {
    fn new(p_hat: f64, std_error: f64, trials: u64) -> Self {
        SuccessEstimate {
            p_hat,
            std_error,
            trials,
            ci95: (p_hat - 1.96 * std_error, p_hat + 1.96 * std_error),
        }
    }

    /// Whether `value` lies within `k` standard errors of the estimate.
    pub fn agrees_with(&self, value: f64, k: f64) -> bool {
        (self.p_hat - value).abs() <= k * self.std_error
    }
}

/// Running sums over a set of trials.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Tally {
    pub trials: u64,
    pub successes: u64,
    pub sum: f64,
    pub sum_sq: f64,
}

impl Tally {
    pub fn merge(self, other: Tally) -> Tally {
        Tally {
            trials: self.trials + other.trials,
            successes: self.successes + other.successes,
            sum: self.sum + other.sum,
            sum_sq: self.sum_sq + other.sum_sq,
        }
    }

    pub fn estimate(&self, estimator: Estimator) -> SuccessEstimate {
        let n = self.trials as f64;
        match estimator {
            Estimator::Indicator => {
                let p = self.successes as f64 / n;
                SuccessEstimate::new(p, libm::sqrt(p * (1.0 - p) / n), self.trials)
            }
            Estimator::Conditional => {
                let mean = self.sum / n;
                let var = if self.trials > 1 {
                    ((self.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
                } else {
                    0.0
                };
                SuccessEstimate::new(mean, libm::sqrt(var / n), self.trials)
            }
        }
    }
}

/// Radius of the simulation disk.
///
/// The mean interference from a Poisson field beyond distance R is
/// `2πλρR^{2−α}/(α−2)`. The window is the smallest R for which that tail is
/// at most `truncation_fraction` times the tail beyond the serving distance
/// `r_ut`, i.e. `R = r_ut · fraction^{−1/(α−2)}`.
pub fn window_radius(params: &NetworkParams, truncation_fraction: f64) -> f64 {
    let r_ut = params.geometry().r_ut();
    r_ut * libm::pow(truncation_fraction, -1.0 / (params.alpha() - 2.0))
}

/// Expected number of interferers inside the window.
pub fn expected_interferers(params: &NetworkParams, truncation_fraction: f64) -> f64 {
    let r = window_radius(params, truncation_fraction);
    params.lambda() * PI * r * r
}

/// Samples the full snapshot used by trial `trial_index`.
pub fn sample_realization(
    params: &NetworkParams,
    p_hit: f64,
    spec: &SimulationSpec,
    trial_index: u64,
) -> Result<NetworkRealization> {
    check_hit(p_hit)?;
    let window = window_radius(params, spec.truncation_fraction);
    let field = |tag| -> alloc::vec::Vec<Interferer> {
        FieldWalk::new(StreamKey::new(spec.seed, trial_index, tag), params.lambda(), window)
            .map(|c: Candidate| c.materialise(p_hit))
            .collect()
    };
    let backhaul = match (spec.policy, spec.hop_model) {
        (Association::Static, HopModel::Independent) => Some(field(FIELD_BACKHAUL)),
        _ => None,
    };
    Ok(NetworkRealization {
        window_radius: window,
        p_hit,
        tail_compensation: spec.tail_compensation,
        typical: TypicalLink::draw(StreamKey::new(spec.seed, trial_index, FIELD_TYPICAL), p_hit),
        access: field(FIELD_ACCESS),
        backhaul,
    })
}

/// Tallies trials `start..end` without materialising realizations.
pub fn simulate_range(
    params: &NetworkParams,
    p_hit: f64,
    spec: &SimulationSpec,
    start: u64,
    end: u64,
) -> Result<Tally> {
    check_hit(p_hit)?;
    let ctx = TrialContext::new(params, p_hit, spec);
    let mut tally = Tally::default();
    for trial in start..end {
        tally.trials += 1;
        match spec.estimator {
            Estimator::Indicator => {
                if ctx.indicator(trial) {
                    tally.successes += 1;
                }
            }
            Estimator::Conditional => {
                let v = ctx.conditional(trial);
                tally.sum += v;
                tally.sum_sq += v * v;
            }
        }
    }
    Ok(tally)
}

/// Tallies block `block` (trials `block·BLOCK_SIZE ..` clipped to the total).
pub fn simulate_block(params: &NetworkParams, p_hit: f64, spec: &SimulationSpec, block: u64) -> Result<Tally> {
    let start = block * BLOCK_SIZE;
    let end = (start + BLOCK_SIZE).min(spec.trials);
    simulate_range(params, p_hit, spec, start, end)
}

/// Sequential estimate over all trials of `spec`.
///
/// Blocks are merged in index order, so a parallel driver that merges the
/// same blocks in the same order reproduces this value bit for bit.
pub fn estimate_success(params: &NetworkParams, p_hit: f64, spec: &SimulationSpec) -> Result<SuccessEstimate> {
    let mut total = Tally::default();
    for block in 0..spec.blocks() {
        total = total.merge(simulate_block(params, p_hit, spec, block)?);
    }
    Ok(total.estimate(spec.estimator))
}

/// Ratio of two success probabilities with its delta-method standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioEstimate {
    pub value: f64,
    pub std_error: f64,
}

/// Conditional estimates for several hit probabilities from the same
/// realizations, plus each one's ratio to the first.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveEstimate {
    pub p_hits: Vec<f64>,
    pub points: Vec<SuccessEstimate>,
    /// `ratios[k]` is `P(p_hits[k]) / P(p_hits[0])`.
    pub ratios: Vec<RatioEstimate>,
}

/// Running sums of the per-trial conditional values of a curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveTally {
    pub trials: u64,
    len: usize,
    sum: [f64; MAX_CURVE_POINTS],
    sum_sq: [f64; MAX_CURVE_POINTS],
    /// Σ v_k v_0
    cross: [f64; MAX_CURVE_POINTS],
}

impl CurveTally {
    fn new(len: usize) -> Self {
        CurveTally {
            trials: 0,
            len,
            sum: [0.0; MAX_CURVE_POINTS],
            sum_sq: [0.0; MAX_CURVE_POINTS],
            cross: [0.0; MAX_CURVE_POINTS],
        }
    }

    pub fn merge(mut self, other: CurveTally) -> CurveTally {
        self.trials += other.trials;
        for k in 0..self.len {
            self.sum[k] += other.sum[k];
            self.sum_sq[k] += other.sum_sq[k];
            self.cross[k] += other.cross[k];
        }
        self
    }

    pub fn estimate(&self, p_hits: &[f64]) -> CurveEstimate {
        let n = self.trials as f64;
        let len = self.len;
        let mean = |k: usize| self.sum[k] / n;
        // Sample covariance from a raw cross-moment sum.
        let cov = |cross_sum: f64, mean_a: f64, mean_b: f64| {
            if self.trials > 1 {
                (cross_sum - n * mean_a * mean_b) / (n - 1.0)
            } else {
                0.0
            }
        };
        let points = (0..len)
            .map(|k| {
                let tally = Tally {
                    trials: self.trials,
                    successes: 0,
                    sum: self.sum[k],
                    sum_sq: self.sum_sq[k],
                };
                tally.estimate(Estimator::Conditional)
            })
            .collect();
        let m0 = mean(0);
        let var0 = cov(self.sum_sq[0], m0, m0);
        let ratios = (0..len)
            .map(|k| {
                let mk = mean(k);
                let value = mk / m0;
                let var_k = cov(self.sum_sq[k], mk, mk);
                let cov_k0 = cov(self.cross[k], mk, m0);
                let var = (var_k - 2.0 * value * cov_k0 + value * value * var0).max(0.0) / (m0 * m0 * n);
                RatioEstimate {
                    value,
                    std_error: libm::sqrt(var),
                }
            })
            .collect();
        CurveEstimate {
            p_hits: p_hits.to_vec(),
            points,
            ratios,
        }
    }
}

fn check_curve(p_hits: &[f64]) -> Result<()> {
    ensure(
        !p_hits.is_empty() && p_hits.len() <= MAX_CURVE_POINTS,
        "p_hits",
        p_hits.len() as f64,
        "between 1 and 16 hit probabilities",
    )?;
    p_hits.iter().try_for_each(|&p| check_hit(p))
}

/// Curve tally over trials `start..end`, using the conditional estimator
/// regardless of `spec.estimator()`.
pub fn simulate_curve_range(
    params: &NetworkParams,
    p_hits: &[f64],
    spec: &SimulationSpec,
    start: u64,
    end: u64,
) -> Result<CurveTally> {
    check_curve(p_hits)?;
    let ctx = TrialContext::curve(params, p_hits, spec);
    let mut tally = CurveTally::new(p_hits.len());
    let mut values = [0.0; MAX_CURVE_POINTS];
    for trial in start..end {
        ctx.conditional_curve(trial, &mut values);
        tally.trials += 1;
        for k in 0..p_hits.len() {
            let v = values[k];
            tally.sum[k] += v;
            tally.sum_sq[k] += v * v;
            tally.cross[k] += v * values[0];
        }
    }
    Ok(tally)
}

pub fn simulate_curve_block(
    params: &NetworkParams,
    p_hits: &[f64],
    spec: &SimulationSpec,
    block: u64,
) -> Result<CurveTally> {
    let start = block * BLOCK_SIZE;
    let end = (start + BLOCK_SIZE).min(spec.trials);
    simulate_curve_range(params, p_hits, spec, start, end)
}

/// Success probability at several hit probabilities on common realizations.
///
/// Sharing the realizations makes the estimated ratios far more precise
/// than independent runs would.
pub fn estimate_curve(params: &NetworkParams, p_hits: &[f64], spec: &SimulationSpec) -> Result<CurveEstimate> {
    check_curve(p_hits)?;
    let mut total = CurveTally::new(p_hits.len());
    for block in 0..spec.blocks() {
        total = total.merge(simulate_curve_block(params, p_hits, spec, block)?);
    }
    Ok(total.estimate(p_hits))
}

fn check_hit(p_hit: f64) -> Result<()> {
    ensure((0.0..=1.0).contains(&p_hit), "p_hit", p_hit, "0 <= p_hit <= 1")
}

#[cfg(test)]
mod tests;
