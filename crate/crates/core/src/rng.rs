//! Seeded, splittable streams of complex Gaussians.
//!
//! All randomness in the crate flows through [`SeedStream`]: a ChaCha8
//! generator seeded from a single 64-bit seed, with substreams selected
//! through the ChaCha stream counter so parallel workers never share
//! state. Gaussians come from an explicit Box-Muller transform so the
//! byte-level output is pinned by this file alone.

use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct SeedStream {
    seed: u64,
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl SeedStream {
    pub fn new(seed: u64) -> Self {
        SeedStream {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Independent substream for a worker or suite; same seed, distinct
    /// ChaCha stream counter.
    pub fn substream(&self, label: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(label);
        SeedStream {
            seed: self.seed,
            rng,
            spare: None,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform in the open interval (0, 1).
    pub fn uniform_open01(&mut self) -> f64 {
        loop {
            let u = (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
            if u > 0.0 {
                return u;
            }
        }
    }

    /// Standard real Gaussian via Box-Muller; the paired value is cached.
    pub fn gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.uniform_open01();
        let u2 = self.uniform_open01();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = std::f64::consts::TAU * u2;
        self.spare = Some(radius * angle.sin());
        radius * angle.cos()
    }

    /// Standard complex Gaussian: two independent real Gaussians.
    pub fn cgaussian(&mut self) -> Complex64 {
        let re = self.gaussian();
        let im = self.gaussian();
        Complex64::new(re, im)
    }
}
