use serde::{Deserialize, Serialize};

use super::bam_probability;
use crate::nav::ModeId;

/// Discrete support for the operator's adaptability.
pub const ALPHA_SUPPORT: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

/// Belief over the hidden part of the state: adaptability and operator mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptationBelief {
    pub alpha_probs: [f64; 5],
    /// Last inferred operator mode; `None` is "unknown".
    pub current_m_h: Option<ModeId>,
}

impl AdaptationBelief {
    pub fn uniform() -> Self {
        Self {
            alpha_probs: [0.2; 5],
            current_m_h: None,
        }
    }

    /// Prior leaning toward a fully adaptable operator while keeping every
    /// support point reachable.
    pub fn adaptable() -> Self {
        Self {
            alpha_probs: [0.1, 0.1, 0.1, 0.1, 0.6],
            current_m_h: None,
        }
    }

    pub fn point_mass(index: usize) -> Self {
        let mut alpha_probs = [0.0; 5];
        alpha_probs[index] = 1.0;
        Self {
            alpha_probs,
            current_m_h: None,
        }
    }

    pub fn with_mode(mut self, m_h: Option<ModeId>) -> Self {
        self.current_m_h = m_h;
        self
    }

    pub fn is_valid(&self) -> bool {
        let sum: f64 = self.alpha_probs.iter().sum();
        self.alpha_probs.iter().all(|&p| p >= 0.0 && p.is_finite()) && (sum - 1.0).abs() <= 1e-9
    }

    pub fn mean_alpha(&self) -> f64 {
        ALPHA_SUPPORT
            .iter()
            .zip(self.alpha_probs)
            .map(|(a, p)| a * p)
            .sum()
    }

    /// Probability mass on support points with `alpha >= threshold`.
    pub fn mass_at_least(&self, threshold: f64) -> f64 {
        ALPHA_SUPPORT
            .iter()
            .zip(self.alpha_probs)
            .filter(|(a, _)| **a >= threshold)
            .map(|(_, p)| p)
            .sum()
    }
}

impl Default for AdaptationBelief {
    fn default() -> Self {
        Self::adaptable()
    }
}

/// Bayes update of the adaptability belief after seeing the operator move to
/// `observed` from `m_h_prev` while the robot proposed `m_r_prev`.
///
/// When the observation has zero likelihood under every support point the
/// adaptability belief is left as is. The operator mode always becomes `observed`.
pub fn update_belief(
    belief: &AdaptationBelief,
    observed: ModeId,
    m_h_prev: ModeId,
    m_r_prev: ModeId,
) -> AdaptationBelief {
    let mut post = [0.0; 5];
    for (i, alpha) in ALPHA_SUPPORT.iter().enumerate() {
        post[i] = belief.alpha_probs[i] * bam_probability(*alpha, m_h_prev, m_r_prev, observed);
    }
    let z: f64 = post.iter().sum();
    let alpha_probs = if z > 0.0 {
        post.map(|p| p / z)
    } else {
        belief.alpha_probs
    };
    AdaptationBelief {
        alpha_probs,
        current_m_h: Some(observed),
    }
}
