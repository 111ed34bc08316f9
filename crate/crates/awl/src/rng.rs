//! Seedable, stream-splittable randomness.
//!
//! Every generator in this crate is a pure function of its parameters and a
//! [`RandomSource`]. A source is a `(base_seed, stream_index)` pair; the pair
//! is expanded into a ChaCha12 key by a fixed splitmix64-style mix, so the
//! byte stream behind a given pair never changes across platforms or releases.
//!
//! Derivation, bit-stable forever:
//!
//! ```text
//! mix64(z): z ^= z >> 30; z *= 0xbf58476d1ce4e5b9;
//!           z ^= z >> 27; z *= 0x94d049bb133111eb;
//!           z ^= z >> 31
//! state   = mix64(base_seed ^ GOLDEN * (stream_index + 1))
//! key[i]  = mix64(state + GOLDEN * (i + 1)),  i = 0..4, little-endian words
//! GOLDEN  = 0x9e3779b97f4a7c15
//! ```

use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// splitmix64 finalizer: two rounds of multiply-xor-shift.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A reproducible random stream identified by `(base_seed, stream_index)`.
///
/// Identical pairs yield identical value sequences; distinct stream indices
/// yield statistically independent streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomSource {
    pub base_seed: u64,
    pub stream_index: u64,
}

impl RandomSource {
    /// Stream 0 of `base_seed`.
    pub fn new(base_seed: u64) -> Self {
        Self { base_seed, stream_index: 0 }
    }

    pub fn stream(base_seed: u64, stream_index: u64) -> Self {
        Self { base_seed, stream_index }
    }

    /// Child source: independent sub-streams of this source, indexed by `index`.
    /// The child's base seed is this source's mixed state, so substreams of
    /// distinct parents do not collide.
    pub fn substream(&self, index: u64) -> Self {
        Self {
            base_seed: self.mixed_state(),
            stream_index: index,
        }
    }

    fn mixed_state(&self) -> u64 {
        mix64(self.base_seed ^ GOLDEN.wrapping_mul(self.stream_index.wrapping_add(1)))
    }

    /// Instantiate the generator for this stream.
    pub fn rng(&self) -> ChaCha12Rng {
        let state = self.mixed_state();
        let mut key = [0u8; 32];
        for (i, chunk) in key.chunks_exact_mut(8).enumerate() {
            let word = mix64(state.wrapping_add(GOLDEN.wrapping_mul(i as u64 + 1)));
            chunk.copy_from_slice(&word.to_le_bytes());
        }
        ChaCha12Rng::from_seed(key)
    }
}

/// Distribution of edge weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightDistribution {
    /// Uniform on [0, 1).
    UniformUnit,
    /// Exponential with mean one, sampled as -ln(1 - U).
    ExponentialMeanOne,
}

impl WeightDistribution {
    pub fn sample(&self, rng: &mut ChaCha12Rng) -> f64 {
        let u = unit_f64(rng);
        match self {
            WeightDistribution::UniformUnit => u,
            // -ln(1 - u) computed via ln_1p for accuracy near u = 0
            WeightDistribution::ExponentialMeanOne => -(-u).ln_1p(),
        }
    }

    /// P(weight >= t) under this distribution.
    pub fn survival(&self, t: f64) -> f64 {
        match self {
            WeightDistribution::UniformUnit => (1.0 - t).clamp(0.0, 1.0),
            WeightDistribution::ExponentialMeanOne => (-t).exp(),
        }
    }
}

/// Uniform f64 in [0, 1) with 53 bits of precision: (next_u64 >> 11) * 2^-53.
pub fn unit_f64(rng: &mut ChaCha12Rng) -> f64 {
    const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
    (rng.next_u64() >> 11) as f64 * SCALE
}

/// Unbiased uniform integer in [0, bound) by Lemire multiply-shift rejection.
pub fn index_below(rng: &mut ChaCha12Rng, bound: u64) -> u64 {
    assert!(bound > 0, "index_below: bound must be positive");
    let threshold = bound.wrapping_neg() % bound;
    loop {
        let x = rng.next_u64();
        let m = (x as u128) * (bound as u128);
        if (m as u64) >= threshold {
            return (m >> 64) as u64;
        }
    }
}

/// In-place Fisher-Yates shuffle, iterating from the back.
pub fn shuffle<T>(items: &mut [T], rng: &mut ChaCha12Rng) {
    for i in (1..items.len()).rev() {
        let j = index_below(rng, i as u64 + 1) as usize;
        items.swap(i, j);
    }
}

/// A uniform random permutation of 0..n.
pub fn random_permutation(n: usize, rng: &mut ChaCha12Rng) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    shuffle(&mut perm, rng);
    perm
}

/// k distinct indices sampled uniformly from 0..n (partial Fisher-Yates);
/// returned in selection order.
pub fn sample_distinct(n: usize, k: usize, rng: &mut ChaCha12Rng) -> Vec<usize> {
    assert!(k <= n, "sample_distinct: k must not exceed n");
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = i + index_below(rng, (n - i) as u64) as usize;
        pool.swap(i, j);
    }
    pool.truncate(k);
    pool
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_source_identical_sequence() {
        let a = RandomSource::stream(42, 7);
        let b = RandomSource::stream(42, 7);
        let xs: Vec<u64> = (0..32).map(|_| a.rng().next_u64()).collect();
        let mut rb = b.rng();
        let mut ra = a.rng();
        for _ in 0..32 {
            assert_eq!(ra.next_u64(), rb.next_u64());
        }
        assert_eq!(xs[0], a.rng().next_u64());
    }

    #[test]
    fn distinct_streams_differ() {
        let mut r0 = RandomSource::stream(42, 0).rng();
        let mut r1 = RandomSource::stream(42, 1).rng();
        let same = (0..16).filter(|_| r0.next_u64() == r1.next_u64()).count();
        assert_eq!(same, 0);
    }

    #[test]
    fn substreams_are_independent_of_siblings() {
        let parent = RandomSource::new(9);
        let a = parent.substream(0);
        let b = parent.substream(1);
        assert_ne!(a.rng().next_u64(), b.rng().next_u64());
        // substream of a different parent stream must not collide
        let other = RandomSource::stream(9, 1).substream(0);
        assert_ne!(a.rng().next_u64(), other.rng().next_u64());
    }

    #[test]
    fn unit_f64_range() {
        let mut rng = RandomSource::new(1).rng();
        for _ in 0..10_000 {
            let u = unit_f64(&mut rng);
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn exponential_is_nonnegative_finite() {
        let mut rng = RandomSource::new(2).rng();
        for _ in 0..10_000 {
            let x = WeightDistribution::ExponentialMeanOne.sample(&mut rng);
            assert!(x.is_finite() && x >= 0.0);
        }
    }

    #[test]
    fn index_below_covers_range() {
        let mut rng = RandomSource::new(3).rng();
        let mut seen = [false; 7];
        for _ in 0..1_000 {
            seen[index_below(&mut rng, 7) as usize] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn sample_distinct_is_distinct() {
        let mut rng = RandomSource::new(4).rng();
        let mut picked = sample_distinct(50, 20, &mut rng);
        picked.sort_unstable();
        picked.dedup();
        assert_eq!(picked.len(), 20);
        assert!(picked.iter().all(|&i| i < 50));
    }
}
