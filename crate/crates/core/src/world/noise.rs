use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::object::SimConfig;

/// Generator behind every stochastic draw of an episode.
pub type SimRng = ChaCha8Rng;

impl super::object::SimConfig {
    pub fn rng(&self) -> SimRng {
        SimRng::seed_from_u64(self.seed)
    }
}

/// Normal-force sensor reading: the true force plus the configured bias and
/// zero-mean Gaussian noise. Without noise no draw is consumed.
pub fn measure_normal(true_force: f64, cfg: &SimConfig, rng: &mut SimRng) -> f64 {
    let biased = true_force + cfg.measurement_bias;
    if cfg.noise_std == 0.0 {
        return biased;
    }
    // noise_std validated finite and non-negative
    let noise = Normal::new(0.0, cfg.noise_std).expect("valid noise_std");
    biased + noise.sample(rng)
}
