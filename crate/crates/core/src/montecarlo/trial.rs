//! SINR tests of one trial.
//!
//! The same generic routines run on a materialised [`NetworkRealization`] and
//! on the lazily sampled field walk, which therefore give identical outcomes.

use super::realization::{Candidate, FieldWalk, Interferer, NetworkRealization, TypicalLink};
use super::realization::{FIELD_ACCESS, FIELD_BACKHAUL, FIELD_TYPICAL};
use super::rng::StreamKey;
use super::{window_radius, HopModel, SimulationSpec};
use core::f64::consts::PI;

use crate::model::{Association, NetworkParams};

/// Read access to an interferer's marks.
pub(crate) trait Marks {
    fn radius_sq(&self) -> f64;
    fn hit(&self, p_hit: f64) -> bool;
    fn sc_fading(&self) -> f64;
    fn bh_fading(&self) -> f64;
    fn bh_fading_to_serving_sc(&self) -> f64;
    fn bh_distance_sq(&self, r_bh: f64) -> f64;
    fn bh_offset_distance_sq(&self, r_bh: f64, x0: f64) -> f64;
}

impl Marks for Candidate {
    #[inline]
    fn radius_sq(&self) -> f64 {
        self.radius_sq
    }
    #[inline]
    fn hit(&self, p_hit: f64) -> bool {
        Candidate::hit(self, p_hit)
    }
    #[inline]
    fn sc_fading(&self) -> f64 {
        Candidate::sc_fading(self)
    }
    #[inline]
    fn bh_fading(&self) -> f64 {
        Candidate::bh_fading(self)
    }
    #[inline]
    fn bh_fading_to_serving_sc(&self) -> f64 {
        Candidate::bh_fading_to_serving_sc(self)
    }
    #[inline]
    fn bh_distance_sq(&self, r_bh: f64) -> f64 {
        Candidate::bh_distance_sq(self, r_bh)
    }
    #[inline]
    fn bh_offset_distance_sq(&self, r_bh: f64, x0: f64) -> f64 {
        Candidate::bh_offset_distance_sq(self, r_bh, x0)
    }
}

impl Marks for &Interferer {
    #[inline]
    fn radius_sq(&self) -> f64 {
        self.radius_sq
    }
    // The flag was drawn against the hit probability the field was sampled with.
    #[inline]
    fn hit(&self, _p_hit: f64) -> bool {
        self.hit
    }
    #[inline]
    fn sc_fading(&self) -> f64 {
        self.sc_fading
    }
    #[inline]
    fn bh_fading(&self) -> f64 {
        self.bh_fading
    }
    #[inline]
    fn bh_fading_to_serving_sc(&self) -> f64 {
        self.bh_fading_to_serving_sc
    }
    #[inline]
    fn bh_distance_sq(&self, r_bh: f64) -> f64 {
        Interferer::bh_distance_sq(self, r_bh)
    }
    #[inline]
    fn bh_offset_distance_sq(&self, r_bh: f64, x0: f64) -> f64 {
        Interferer::bh_offset_distance_sq(self, r_bh, x0)
    }
}

/// `d2^{−α/2}` with a multiplication-only path for α = 4.
#[derive(Debug, Clone, Copy)]
enum Pathloss {
    Quartic,
    General(f64),
}

impl Pathloss {
    fn new(alpha: f64) -> Self {
        if alpha == 4.0 {
            Pathloss::Quartic
        } else {
            Pathloss::General(0.5 * alpha)
        }
    }

    #[inline]
    fn gain(self, d2: f64) -> f64 {
        match self {
            Pathloss::Quartic => {
                let inv = 1.0 / d2;
                inv * inv
            }
            Pathloss::General(half) => libm::pow(d2, -half),
        }
    }
}

/// Most hit probabilities one curve pass can evaluate.
pub const MAX_CURVE_POINTS: usize = 16;

/// Constants shared by every trial of one estimate.
#[derive(Debug, Clone)]
pub(crate) struct TrialContext {
    seed: u64,
    lambda: f64,
    window: f64,
    p_hits: [f64; MAX_CURVE_POINTS],
    len: usize,
    policy: Association,
    hop_model: HopModel,
    link: Link,
}

/// Parameter-only part of the SINR tests.
#[derive(Debug, Clone, Copy)]
struct Link {
    pathloss: Pathloss,
    theta: f64,
    sigma2: f64,
    rho_sc: f64,
    rho_bh: f64,
    r_ut: f64,
    r_bh: f64,
    /// Received SC power at the serving distance before fading.
    access_power: f64,
    /// Received BH power at the BH→SC distance before fading.
    backhaul_power: f64,
    tail: Tail,
}

/// Mean interference from nodes outside the window if every SC of the tier
/// were active. Zero when compensation is off.
#[derive(Debug, Clone, Copy, Default)]
struct Tail {
    sc: f64,
    bh: f64,
    bh_shared: f64,
}

impl Tail {
    fn new(params: &NetworkParams, window: f64) -> Self {
        let g = params.geometry();
        let (r_ut, r_bh) = (g.r_ut(), g.r_bh());
        let outside = |offset_sq: f64| params.lambda() * outside_mass(params.alpha(), window, offset_sq);
        Tail {
            sc: params.rho_sc() * outside(0.0),
            bh: params.rho_bh() * outside(r_bh * r_bh),
            bh_shared: params.rho_bh() * outside(r_bh * r_bh + r_ut * r_ut),
        }
    }

    fn backhaul(&self, p_hit: f64, shared: bool) -> f64 {
        (1.0 - p_hit) * if shared { self.bh_shared } else { self.bh }
    }

    fn dynamic(&self, p_hit: f64) -> f64 {
        p_hit * self.sc + (1.0 - p_hit) * self.bh
    }
}

/// `∫_{|x|>R} |x + b|^{−α} dx` averaged over the direction of `b`, to
/// second order in `|b|/R`.
///
/// The angular mean of `|x + b|^{−α}` is `r^{−α}(1 + (α/2)²|b|²/r² + …)`.
pub(crate) fn outside_mass(alpha: f64, window: f64, offset_sq: f64) -> f64 {
    let r_pow = libm::pow(window, -alpha);
    2.0 * PI * (window * window * r_pow / (alpha - 2.0) + 0.25 * alpha * offset_sq * r_pow)
}

impl Link {
    fn new(params: &NetworkParams, window: f64, tail_compensation: bool) -> Self {
        let g = params.geometry();
        let pathloss = Pathloss::new(params.alpha());
        Link {
            pathloss,
            theta: params.theta(),
            sigma2: params.sigma2(),
            rho_sc: params.rho_sc(),
            rho_bh: params.rho_bh(),
            r_ut: g.r_ut(),
            r_bh: g.r_bh(),
            access_power: params.rho_sc() * pathloss.gain(g.r_ut() * g.r_ut()),
            backhaul_power: params.rho_bh() * pathloss.gain(g.r_bh() * g.r_bh()),
            tail: if tail_compensation {
                Tail::new(params, window)
            } else {
                Tail::default()
            },
        }
    }

    /// Squared BH→UT distance of the serving BH.
    #[inline]
    fn direct_bh_distance_sq(&self, phi: f64) -> f64 {
        self.r_ut * self.r_ut + self.r_bh * self.r_bh + 2.0 * self.r_ut * self.r_bh * libm::cos(phi)
    }

    /// Largest in-window interference that still lets `signal` clear the
    /// threshold.
    #[inline]
    fn interference_budget(&self, signal: f64, tail: f64) -> f64 {
        signal / self.theta - self.sigma2 - tail
    }

    // ---- indicator tests ----

    fn access_ok<M: Marks>(&self, field: impl Iterator<Item = M>, typical: &TypicalLink) -> bool {
        let budget = self.interference_budget(self.access_power * typical.access_fading, self.tail.sc);
        below_budget(field, budget, |m| {
            self.rho_sc * m.sc_fading() * self.pathloss.gain(m.radius_sq())
        })
    }

    fn backhaul_ok<M: Marks>(
        &self,
        field: impl Iterator<Item = M>,
        typical: &TypicalLink,
        p_hit: f64,
        shared: bool,
    ) -> bool {
        let budget = self.interference_budget(
            self.backhaul_power * typical.backhaul_fading,
            self.tail.backhaul(p_hit, shared),
        );
        if shared {
            below_budget(field, budget, |m| {
                if m.hit(p_hit) {
                    0.0
                } else {
                    self.rho_bh
                        * m.bh_fading_to_serving_sc()
                        * self.pathloss.gain(m.bh_offset_distance_sq(self.r_bh, self.r_ut))
                }
            })
        } else {
            below_budget(field, budget, |m| {
                if m.hit(p_hit) {
                    0.0
                } else {
                    self.rho_bh * m.bh_fading() * self.pathloss.gain(m.bh_distance_sq(self.r_bh))
                }
            })
        }
    }

    fn dynamic_ok<M: Marks>(
        &self,
        field: impl Iterator<Item = M>,
        typical: &TypicalLink,
        typical_hit: bool,
        p_hit: f64,
    ) -> bool {
        let signal = if typical_hit {
            self.access_power * typical.access_fading
        } else {
            self.rho_bh * typical.backhaul_fading * self.pathloss.gain(self.direct_bh_distance_sq(typical.phi))
        };
        below_budget(field, self.interference_budget(signal, self.tail.dynamic(p_hit)), |m| {
            self.mixed_interference(m, p_hit)
        })
    }

    #[inline]
    fn mixed_interference<M: Marks>(&self, m: &M, p_hit: f64) -> f64 {
        if m.hit(p_hit) {
            self.rho_sc * m.sc_fading() * self.pathloss.gain(m.radius_sq())
        } else {
            self.rho_bh * m.bh_fading() * self.pathloss.gain(m.bh_distance_sq(self.r_bh))
        }
    }

    // ---- conditional statistics ----
    //
    // Each routine fills `out[k]` with the conditional success probability
    // for `p_hits[k]`, sharing one pass over the field.

    /// `θ·d^α/ρ`, the Laplace argument of a link of squared length `d2`.
    #[inline]
    fn laplace_arg(&self, d2: f64, rho: f64) -> f64 {
        self.theta / (rho * self.pathloss.gain(d2))
    }

    fn static_conditional<M: Marks>(
        &self,
        access: impl Iterator<Item = M>,
        backhaul: Option<impl Iterator<Item = M>>,
        access_for_backhaul: impl Iterator<Item = M>,
        p_hits: &[f64],
        out: &mut [f64],
    ) {
        let s_ut = self.laplace_arg(self.r_ut * self.r_ut, self.rho_sc);
        let access_prob = libm::exp(-s_ut * (self.sigma2 + self.tail.sc))
            * access.fold(1.0, |acc, m| {
                acc / (1.0 + s_ut * self.rho_sc * self.pathloss.gain(m.radius_sq()))
            });
        if p_hits.iter().all(|&p| p == 1.0) {
            out.fill(access_prob);
            return;
        }
        let s_bh = self.laplace_arg(self.r_bh * self.r_bh, self.rho_bh);
        let mut prod = [1.0; MAX_CURVE_POINTS];
        let mut absorb = |d2: f64| {
            let x = 1.0 / (1.0 + s_bh * self.rho_bh * self.pathloss.gain(d2));
            for (acc, &p) in prod.iter_mut().zip(p_hits) {
                *acc *= p + (1.0 - p) * x;
            }
        };
        let shared = backhaul.is_none();
        match backhaul {
            Some(field) => field.for_each(|m| absorb(m.bh_distance_sq(self.r_bh))),
            None => access_for_backhaul.for_each(|m| absorb(m.bh_offset_distance_sq(self.r_bh, self.r_ut))),
        }
        for ((o, &p), &field_prob) in out.iter_mut().zip(p_hits).zip(&prod) {
            let backhaul_prob = libm::exp(-s_bh * (self.sigma2 + self.tail.backhaul(p, shared))) * field_prob;
            *o = access_prob * (p + (1.0 - p) * backhaul_prob);
        }
    }

    fn dynamic_conditional<M: Marks>(&self, field: impl Iterator<Item = M>, phi: f64, p_hits: &[f64], out: &mut [f64]) {
        let s_hit = self.laplace_arg(self.r_ut * self.r_ut, self.rho_sc);
        let s_miss = self.laplace_arg(self.direct_bh_distance_sq(phi), self.rho_bh);
        let any_miss = p_hits.iter().any(|&p| p < 1.0);
        let mut hit_prod = [1.0; MAX_CURVE_POINTS];
        let mut miss_prod = [1.0; MAX_CURVE_POINTS];
        for m in field {
            let sc = self.rho_sc * self.pathloss.gain(m.radius_sq());
            let bh = if any_miss {
                self.rho_bh * self.pathloss.gain(m.bh_distance_sq(self.r_bh))
            } else {
                0.0
            };
            let (hit_sc, hit_bh) = (1.0 / (1.0 + s_hit * sc), 1.0 / (1.0 + s_hit * bh));
            let (miss_sc, miss_bh) = (1.0 / (1.0 + s_miss * sc), 1.0 / (1.0 + s_miss * bh));
            for (k, &p) in p_hits.iter().enumerate() {
                hit_prod[k] *= p * hit_sc + (1.0 - p) * hit_bh;
                miss_prod[k] *= p * miss_sc + (1.0 - p) * miss_bh;
            }
        }
        for (k, (o, &p)) in out.iter_mut().zip(p_hits).enumerate() {
            let noise = self.sigma2 + self.tail.dynamic(p);
            let hit = libm::exp(-s_hit * noise) * hit_prod[k];
            let miss = libm::exp(-s_miss * noise) * miss_prod[k];
            *o = p * hit + (1.0 - p) * miss;
        }
    }
}

/// True when the summed interference stays strictly below `budget`; stops as
/// soon as the running sum reaches it.
#[inline]
fn below_budget<M>(field: impl Iterator<Item = M>, budget: f64, mut contribution: impl FnMut(&M) -> f64) -> bool {
    if budget.is_nan() || budget <= 0.0 {
        return false;
    }
    let mut total = 0.0;
    for m in field {
        total += contribution(&m);
        if total >= budget {
            return false;
        }
    }
    true
}

impl TrialContext {
    pub(crate) fn new(params: &NetworkParams, p_hit: f64, spec: &SimulationSpec) -> Self {
        Self::curve(params, &[p_hit], spec)
    }

    /// Context evaluating up to [`MAX_CURVE_POINTS`] hit probabilities on
    /// the same realizations. The indicator uses the first one.
    pub(crate) fn curve(params: &NetworkParams, p_hits: &[f64], spec: &SimulationSpec) -> Self {
        assert!(!p_hits.is_empty() && p_hits.len() <= MAX_CURVE_POINTS);
        let window = window_radius(params, spec.truncation_fraction());
        let mut stored = [0.0; MAX_CURVE_POINTS];
        stored[..p_hits.len()].copy_from_slice(p_hits);
        TrialContext {
            seed: spec.seed(),
            lambda: params.lambda(),
            window,
            p_hits: stored,
            len: p_hits.len(),
            policy: spec.policy(),
            hop_model: spec.hop_model(),
            link: Link::new(params, window, spec.tail_compensation()),
        }
    }

    fn p_hit(&self) -> f64 {
        self.p_hits[0]
    }

    fn walk(&self, trial: u64, field: u64) -> FieldWalk {
        FieldWalk::new(StreamKey::new(self.seed, trial, field), self.lambda, self.window)
    }

    fn typical(&self, trial: u64) -> TypicalLink {
        TypicalLink::draw(StreamKey::new(self.seed, trial, FIELD_TYPICAL), self.p_hit())
    }

    pub(crate) fn indicator(&self, trial: u64) -> bool {
        let typical = self.typical(trial);
        let link = &self.link;
        let p_hit = self.p_hit();
        match self.policy {
            Association::Static => {
                if !link.access_ok(self.walk(trial, FIELD_ACCESS), &typical) {
                    return false;
                }
                if typical.hit {
                    return true;
                }
                match self.hop_model {
                    HopModel::Independent => link.backhaul_ok(self.walk(trial, FIELD_BACKHAUL), &typical, p_hit, false),
                    HopModel::Correlated => link.backhaul_ok(self.walk(trial, FIELD_ACCESS), &typical, p_hit, true),
                }
            }
            Association::Dynamic => link.dynamic_ok(self.walk(trial, FIELD_ACCESS), &typical, typical.hit, p_hit),
        }
    }

    pub(crate) fn conditional(&self, trial: u64) -> f64 {
        let mut out = [0.0; MAX_CURVE_POINTS];
        self.conditional_curve(trial, &mut out);
        out[0]
    }

    /// Conditional values for every stored hit probability.
    pub(crate) fn conditional_curve(&self, trial: u64, out: &mut [f64; MAX_CURVE_POINTS]) {
        let link = &self.link;
        let p_hits = &self.p_hits[..self.len];
        let out = &mut out[..self.len];
        match self.policy {
            Association::Static => {
                let backhaul = match self.hop_model {
                    HopModel::Independent => Some(self.walk(trial, FIELD_BACKHAUL)),
                    HopModel::Correlated => None,
                };
                link.static_conditional(
                    self.walk(trial, FIELD_ACCESS),
                    backhaul,
                    self.walk(trial, FIELD_ACCESS),
                    p_hits,
                    out,
                )
            }
            Association::Dynamic => {
                let phi = self.typical(trial).phi;
                link.dynamic_conditional(self.walk(trial, FIELD_ACCESS), phi, p_hits, out)
            }
        }
    }
}

/// SINR test of one realization.
///
/// `typical_hit` selects the cache state of the typical SC, overriding the
/// one drawn into the realization. Static association checks the access hop
/// and, on a miss, the backhaul hop (on the independent backhaul field if the
/// realization has one, on the shared access field otherwise).
pub fn evaluate_trial(
    realization: &NetworkRealization,
    params: &NetworkParams,
    policy: Association,
    typical_hit: bool,
) -> bool {
    let link = Link::new(params, realization.window_radius, realization.tail_compensation);
    let typical = &realization.typical;
    // Stored hit flags ignore it; only the tail terms use it.
    let p_hit = realization.p_hit;
    match policy {
        Association::Static => {
            if !link.access_ok(realization.access.iter(), typical) {
                return false;
            }
            if typical_hit {
                return true;
            }
            match &realization.backhaul {
                Some(field) => link.backhaul_ok(field.iter(), typical, p_hit, false),
                None => link.backhaul_ok(realization.access.iter(), typical, p_hit, true),
            }
        }
        Association::Dynamic => link.dynamic_ok(realization.access.iter(), typical, typical_hit, p_hit),
    }
}

/// Success probability of one realization conditioned on node positions,
/// BH angles and the serving-BH angle; fading, cache marks and the typical
/// cache state are averaged in closed form.
///
/// `p_hit` may differ from the probability the realization was drawn with;
/// the stored cache marks are not used.
pub fn conditional_value(
    realization: &NetworkRealization,
    params: &NetworkParams,
    policy: Association,
    p_hit: f64,
) -> f64 {
    let link = Link::new(params, realization.window_radius, realization.tail_compensation);
    let mut out = [0.0];
    match policy {
        Association::Static => link.static_conditional(
            realization.access.iter(),
            realization.backhaul.as_ref().map(|f| f.iter()),
            realization.access.iter(),
            &[p_hit],
            &mut out,
        ),
        Association::Dynamic => {
            link.dynamic_conditional(realization.access.iter(), realization.typical.phi, &[p_hit], &mut out)
        }
    }
    out[0]
}
