//! Counter-based random streams.
//!
//! Every random quantity of a trial is addressed by
//! `(seed, trial, field, interferer index, slot)`. The value is a hash of
//! that address, so any subset of quantities can be drawn in any order
//! without disturbing the others. That is what lets the early-exit fast path
//! and the fully materialised realization agree bit for bit, and makes the
//! estimate independent of how trials are spread over threads.

use rand_core::{impls, RngCore};

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// Room left for one slot: rejection samplers draw a handful of words at most.
const SLOT_SPAN: u64 = 1 << 8;
const SLOTS_PER_ITEM: u64 = 8;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Identifies one independent stream of items (e.g. the interferers around
/// one receiver in one trial).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamKey(u64);

impl StreamKey {
    pub fn new(seed: u64, trial: u64, field: u64) -> Self {
        let k = mix(seed.wrapping_add(GOLDEN));
        let k = mix(k ^ trial.wrapping_mul(GOLDEN));
        StreamKey(mix(k.wrapping_add(field.wrapping_mul(0xd1b5_4a32_d192_ed03))))
    }

    /// Generator for attribute `slot` of item `index`.
    #[inline]
    pub fn slot(self, index: u64, slot: u64) -> CounterRng {
        debug_assert!(slot < SLOTS_PER_ITEM);
        CounterRng {
            key: self.0,
            counter: (index * SLOTS_PER_ITEM + slot) * SLOT_SPAN,
        }
    }
}

/// SplitMix-style generator whose n-th output is a pure function of
/// `(key, counter + n)`.
#[derive(Debug, Clone)]
pub struct CounterRng {
    key: u64,
    counter: u64,
}

impl RngCore for CounterRng {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        impls::fill_bytes_via_next(self, dst)
    }
}
