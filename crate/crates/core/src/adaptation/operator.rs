use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::nav::ModeId;

/// Simulated operator that follows the adaptation model with a known
/// adaptability: it adopts the robot's mode with probability `alpha`.
#[derive(Debug, Clone)]
pub struct SyntheticOperator {
    alpha: f64,
    rng: ChaCha8Rng,
}

impl SyntheticOperator {
    pub fn new(alpha: f64, seed: u64) -> Self {
        assert!((0.0..=1.0).contains(&alpha), "alpha must lie in [0, 1]");
        Self {
            alpha,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Next operator mode given their preference and the robot's proposal.
    pub fn next_mode(&mut self, preferred: ModeId, robot_mode: ModeId) -> ModeId {
        let u: f64 = self.rng.gen();
        if preferred == robot_mode || u < self.alpha {
            robot_mode
        } else {
            preferred
        }
    }
}

/// Single draw from a freshly seeded operator.
pub fn synthetic_operator(alpha_true: f64, preferred: ModeId, robot_mode: ModeId, rng_seed: u64) -> ModeId {
    SyntheticOperator::new(alpha_true, rng_seed).next_mode(preferred, robot_mode)
}
