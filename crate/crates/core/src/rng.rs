//! Reproducible noise source.
//!
//! The stream is xoshiro256** seeded through SplitMix64 (the reference
//! seeding procedure), uniforms take the top 53 bits of each output, and
//! Gaussians use the cosine branch of Box-Muller, one draw per pair of
//! uniforms. Every step is fixed so another implementation can replay a run
//! bit-for-bit.

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimRng(Xoshiro256StarStar);

impl SimRng {
    pub fn new(seed: u64) -> Self {
        Self(Xoshiro256StarStar::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn standard_normal(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    pub fn gaussian(&mut self, sigma: f64) -> f64 {
        sigma * self.standard_normal()
    }

    /// Derives an independent child stream from the next output.
    pub fn split(&mut self) -> SimRng {
        SimRng::new(self.next_u64())
    }
}

/// Noise streams of one run, split from a master seed in a fixed order.
#[derive(Debug, Clone)]
pub struct RunStreams {
    pub sensor: SimRng,
    pub actuation: SimRng,
}

impl RunStreams {
    pub fn new(seed: u64) -> Self {
        let mut master = SimRng::new(seed);
        let sensor = master.split();
        let actuation = master.split();
        Self { sensor, actuation }
    }
}
