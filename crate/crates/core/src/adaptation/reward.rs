use serde::{Deserialize, Serialize};

use super::AdaptationError;
use crate::nav::{ModeId, ModeSet};

/// Parameters of the per-step reward and its discounting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RewardConfig {
    /// Discount factor in `(0, 1)`.
    pub beta: f64,
    /// Penalty when robot and operator modes differ.
    pub w_disagree: f64,
    pub goal_bonus: f64,
    /// Weight on the mode cost normalized by the optimal mode's cost.
    pub cost_scale: f64,
}

impl Default for RewardConfig {
    fn default() -> Self {
        Self {
            beta: 0.9,
            w_disagree: 2.0,
            goal_bonus: 10.0,
            cost_scale: 1.0,
        }
    }
}

impl RewardConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(format!("beta must lie in (0, 1), got {}", self.beta));
        }
        for (name, v) in [
            ("w_disagree", self.w_disagree),
            ("goal_bonus", self.goal_bonus),
            ("cost_scale", self.cost_scale),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(format!("{name} must be non-negative, got {v}"));
            }
        }
        Ok(())
    }
}

/// `−scale·cost(m_r)/cost(optimal) − w·[m_r ≠ m_h] + bonus·[at_goal]`.
pub fn reward(
    m_r: ModeId,
    m_h: ModeId,
    modes: &ModeSet,
    at_goal: bool,
    config: &RewardConfig,
) -> Result<f64, AdaptationError> {
    let own = modes.cost(m_r).ok_or(AdaptationError::UnknownMode(m_r))?;
    if !modes.contains(m_h) {
        return Err(AdaptationError::UnknownMode(m_h));
    }
    let best = modes.optimal().path.cost;
    let normalized = if best > 0.0 { own / best } else { 1.0 };
    let mut r = -config.cost_scale * normalized;
    if m_r != m_h {
        r -= config.w_disagree;
    }
    if at_goal {
        r += config.goal_bonus;
    }
    Ok(r)
}
