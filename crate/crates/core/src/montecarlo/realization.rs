//! Sampling of one network snapshot around the typical receivers.

use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng;
use rand_core::RngCore;
use rand_distr::{Distribution, Exp1};

use super::rng::{CounterRng, StreamKey};

pub(crate) const FIELD_TYPICAL: u64 = 0;
pub(crate) const FIELD_ACCESS: u64 = 1;
pub(crate) const FIELD_BACKHAUL: u64 = 2;

const SLOT_RADIAL: u64 = 0;
const SLOT_POLAR: u64 = 1;
const SLOT_HIT: u64 = 2;
const SLOT_BH_BEARING: u64 = 3;
const SLOT_SC_FADING: u64 = 4;
const SLOT_BH_FADING: u64 = 5;
const SLOT_BH_FADING_TO_SC: u64 = 6;

const TYPICAL_HIT: u64 = 0;
const TYPICAL_PHI: u64 = 1;
const TYPICAL_ACCESS_FADING: u64 = 2;
const TYPICAL_BACKHAUL_FADING: u64 = 3;

/// One interfering SC together with its marks, in coordinates centred on the
/// receiver its field was sampled around.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interferer {
    /// Squared distance from the field centre, m².
    pub radius_sq: f64,
    pub polar_angle: f64,
    /// Whether the SC serves its own UT from cache (it then stays silent on
    /// the backhaul tier).
    pub hit: bool,
    /// Unit vector `(cos ψ, sin ψ)` from the SC to its BH, with `ψ`
    /// measured from the outward radial direction.
    pub bh_direction: (f64, f64),
    /// Fading from the SC to the field centre.
    pub sc_fading: f64,
    /// Fading from the BH to the field centre.
    pub bh_fading: f64,
    /// Fading from the BH to the typical SC when the backhaul hop shares the
    /// access-field positions.
    pub bh_fading_to_serving_sc: f64,
}

impl Interferer {
    pub fn position(&self) -> (f64, f64) {
        let r = libm::sqrt(self.radius_sq);
        (r * libm::cos(self.polar_angle), r * libm::sin(self.polar_angle))
    }

    /// Absolute direction from the SC to its BH, in [0, 2π).
    pub fn bh_angle(&self) -> f64 {
        let (c, s) = self.bh_direction;
        let a = (libm::atan2(s, c) + self.polar_angle) % (2.0 * PI);
        if a < 0.0 {
            a + 2.0 * PI
        } else {
            a
        }
    }

    pub fn bh_position(&self, r_bh: f64) -> (f64, f64) {
        let (x, y) = self.position();
        let (c, s) = absolute_direction(self.polar_angle, self.bh_direction);
        (x + r_bh * c, y + r_bh * s)
    }

    /// Squared distance from the BH to the field centre.
    #[inline]
    pub fn bh_distance_sq(&self, r_bh: f64) -> f64 {
        bh_distance_sq(self.radius_sq, self.bh_direction.0, r_bh)
    }

    /// Squared distance from the BH to the point `(x0, 0)`.
    #[inline]
    pub fn bh_offset_distance_sq(&self, r_bh: f64, x0: f64) -> f64 {
        bh_offset_distance_sq(self.radius_sq, self.polar_angle, self.bh_direction, r_bh, x0)
    }
}

#[inline]
pub(crate) fn bh_distance_sq(radius_sq: f64, bearing_cos: f64, r_bh: f64) -> f64 {
    let cross = 2.0 * libm::sqrt(radius_sq) * r_bh * bearing_cos;
    // Guards against a tiny negative value from cancellation.
    (radius_sq + r_bh * r_bh + cross).max(0.0)
}

/// Squared distance from the BH of an interferer to the point `(x0, 0)`.
#[inline]
pub(crate) fn bh_offset_distance_sq(radius_sq: f64, polar: f64, bearing: (f64, f64), r_bh: f64, x0: f64) -> f64 {
    let r = libm::sqrt(radius_sq);
    let (cp, sp) = (libm::cos(polar), libm::sin(polar));
    let (c, s) = rotate((cp, sp), bearing);
    let dx = r * cp + r_bh * c - x0;
    let dy = r * sp + r_bh * s;
    dx * dx + dy * dy
}

#[inline]
fn rotate((cp, sp): (f64, f64), (c, s): (f64, f64)) -> (f64, f64) {
    (cp * c - sp * s, sp * c + cp * s)
}

fn absolute_direction(polar: f64, bearing: (f64, f64)) -> (f64, f64) {
    rotate((libm::cos(polar), libm::sin(polar)), bearing)
}

/// Uniformly distributed unit vector without trigonometry: a point uniform
/// in the unit disk has uniform angle, and squaring it as a complex number
/// keeps the angle uniform while giving the unit vector in closed form.
#[inline]
fn unit_vector(rng: &mut CounterRng) -> (f64, f64) {
    const SCALE: f64 = 1.0 / (1u64 << 31) as f64;
    loop {
        let v = rng.next_u64();
        let x = ((v >> 32) as f64 + 0.5) * SCALE - 1.0;
        let y = ((v & 0xffff_ffff) as f64 + 0.5) * SCALE - 1.0;
        let r2 = x * x + y * y;
        if r2 <= 1.0 {
            return ((x * x - y * y) / r2, 2.0 * x * y / r2);
        }
    }
}

/// Cache state, BH angle and serving-link fading of the typical SC.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TypicalLink {
    pub hit: bool,
    /// Angle of the serving BH around the serving SC, measured so that the
    /// BH→UT squared distance is `r_ut² + r_bh² + 2 r_ut r_bh cos φ`.
    pub phi: f64,
    /// Fading of the SC→UT link.
    pub access_fading: f64,
    /// Fading of the BH→SC link (static) or BH→UT link (dynamic).
    pub backhaul_fading: f64,
}

impl TypicalLink {
    pub(crate) fn draw(key: StreamKey, p_hit: f64) -> Self {
        let u: f64 = key.slot(0, TYPICAL_HIT).random();
        let v: f64 = key.slot(0, TYPICAL_PHI).random();
        TypicalLink {
            hit: u < p_hit,
            phi: 2.0 * PI * v,
            access_fading: Exp1.sample(&mut key.slot(0, TYPICAL_ACCESS_FADING)),
            backhaul_fading: Exp1.sample(&mut key.slot(0, TYPICAL_BACKHAUL_FADING)),
        }
    }
}

/// One sampled snapshot.
///
/// The access field holds the SCs around the typical UT (at the origin). For
/// static association with independent hops, `backhaul` holds a second,
/// independent field around the typical SC; otherwise it is `None` and the
/// backhaul hop reuses the access field with the typical SC at `(r_ut, 0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkRealization {
    pub window_radius: f64,
    /// Hit probability the cache marks were drawn with.
    pub p_hit: f64,
    /// Whether the SINR tests add the mean interference from beyond the
    /// window.
    pub tail_compensation: bool,
    pub typical: TypicalLink,
    pub access: Vec<Interferer>,
    pub backhaul: Option<Vec<Interferer>>,
}

/// Walks a Poisson field outward from its centre.
///
/// Squared radii of a planar PPP of density λ are the partial sums of
/// independent `Exp(1)/(λπ)` increments, so the count inside the window is
/// Poisson(λπR²) and, given the count, the points are uniform in the disk.
#[derive(Debug, Clone)]
pub(crate) struct FieldWalk {
    key: StreamKey,
    index: u64,
    radius_sq: f64,
    scale: f64,
    limit_sq: f64,
}

impl FieldWalk {
    pub(crate) fn new(key: StreamKey, lambda: f64, window_radius: f64) -> Self {
        FieldWalk {
            key,
            index: 0,
            radius_sq: 0.0,
            scale: 1.0 / (lambda * PI),
            limit_sq: window_radius * window_radius,
        }
    }
}

impl Iterator for FieldWalk {
    type Item = Candidate;

    #[inline]
    fn next(&mut self) -> Option<Candidate> {
        let step: f64 = Exp1.sample(&mut self.key.slot(self.index, SLOT_RADIAL));
        self.radius_sq += step * self.scale;
        if self.radius_sq > self.limit_sq {
            return None;
        }
        let c = Candidate {
            key: self.key,
            index: self.index,
            radius_sq: self.radius_sq,
        };
        self.index += 1;
        Some(c)
    }
}

/// An interferer whose marks are drawn on demand.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Candidate {
    key: StreamKey,
    index: u64,
    pub(crate) radius_sq: f64,
}

impl Candidate {
    #[inline]
    pub(crate) fn polar_angle(&self) -> f64 {
        2.0 * PI * self.key.slot(self.index, SLOT_POLAR).random::<f64>()
    }
    #[inline]
    pub(crate) fn hit(&self, p_hit: f64) -> bool {
        self.key.slot(self.index, SLOT_HIT).random::<f64>() < p_hit
    }
    #[inline]
    pub(crate) fn bh_direction(&self) -> (f64, f64) {
        unit_vector(&mut self.key.slot(self.index, SLOT_BH_BEARING))
    }
    #[inline]
    pub(crate) fn sc_fading(&self) -> f64 {
        Exp1.sample(&mut self.key.slot(self.index, SLOT_SC_FADING))
    }
    #[inline]
    pub(crate) fn bh_fading(&self) -> f64 {
        Exp1.sample(&mut self.key.slot(self.index, SLOT_BH_FADING))
    }
    #[inline]
    pub(crate) fn bh_fading_to_serving_sc(&self) -> f64 {
        Exp1.sample(&mut self.key.slot(self.index, SLOT_BH_FADING_TO_SC))
    }
    #[inline]
    pub(crate) fn bh_distance_sq(&self, r_bh: f64) -> f64 {
        bh_distance_sq(self.radius_sq, self.bh_direction().0, r_bh)
    }
    #[inline]
    pub(crate) fn bh_offset_distance_sq(&self, r_bh: f64, x0: f64) -> f64 {
        bh_offset_distance_sq(self.radius_sq, self.polar_angle(), self.bh_direction(), r_bh, x0)
    }

    pub(crate) fn materialise(&self, p_hit: f64) -> Interferer {
        Interferer {
            radius_sq: self.radius_sq,
            polar_angle: self.polar_angle(),
            hit: self.hit(p_hit),
            bh_direction: self.bh_direction(),
            sc_fading: self.sc_fading(),
            bh_fading: self.bh_fading(),
            bh_fading_to_serving_sc: self.bh_fading_to_serving_sc(),
        }
    }
}
