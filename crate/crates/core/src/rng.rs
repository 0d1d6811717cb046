//! Counter-based deterministic random numbers.
//!
//! Every random quantity in the crate is a pure function of a 64-bit seed and
//! a counter (vertex index, trial index, step index, ...). This makes
//! colorings order-independent, parallel fills reproducible, and per-trial
//! seeds derivable without shared state.

/// SplitMix64 finalizer: a bijective avalanche mix of a 64-bit word.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A uniform 64-bit word from (seed, counter). Two mixing rounds so that
/// low-entropy counters (0, 1, 2, ...) still avalanche fully.
#[inline]
pub fn hash2(seed: u64, counter: u64) -> u64 {
    mix64(mix64(seed ^ 0x6A09_E667_F3BC_C909).wrapping_add(counter))
}

/// Derives an independent stream seed, e.g. a per-trial seed from a run seed.
#[inline]
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    hash2(seed ^ 0x5851_F42D_4C95_7F2D, stream)
}

/// Uniform f64 in [0, 1) from a word.
#[inline]
pub fn to_unit_f64(word: u64) -> f64 {
    (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// A tiny sequential PRNG (SplitMix64) for places that want a stream.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        mix64(self.state.wrapping_sub(0x9E37_79B9_7F4A_7C15))
    }

    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        to_unit_f64(self.next_u64())
    }

    /// Uniform integer in [0, bound) by rejection-free scaling (bound << 2^64
    /// so modulo bias is negligible for our uses; bounded uses are small).
    #[inline]
    pub fn next_below(&mut self, bound: u64) -> u64 {
        ((self.next_u64() as u128 * bound as u128) >> 64) as u64
    }
}
