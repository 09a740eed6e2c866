//! Seeded 64-bit splittable PRNG (splitmix64).
//!
//! Randomized estimators take an explicit seed and draw per-trial
//! substreams, so results are reproducible bit-for-bit regardless of
//! scheduling or trial order.

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Independent substream `stream` of a master seed: the stream index
    /// is hashed through the generator before salting the seed, so
    /// adjacent streams do not walk overlapping state orbits.
    pub fn substream(seed: u64, stream: u64) -> Self {
        let salt = SplitMix64::new(stream).next_u64();
        let mut rng = SplitMix64::new(seed ^ salt);
        rng.next_u64();
        rng
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in the open interval (0, 1).
    pub fn next_f64(&mut self) -> f64 {
        loop {
            let u = (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
            if u > 0.0 {
                return u;
            }
        }
    }

    /// Uniform in (lo, hi).
    pub fn next_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}
