use std::collections::BTreeMap;

use super::AdaptationError;
use crate::nav::{ModeId, ModeSet};

/// Probability that an operator in mode `m_h`, facing a robot in mode `m_r`,
/// moves to mode `next`. With probability `alpha` they adopt the robot's mode,
/// otherwise they keep their own.
pub fn bam_probability(alpha: f64, m_h: ModeId, m_r: ModeId, next: ModeId) -> f64 {
    let mut p = 0.0;
    if next == m_r {
        p += alpha;
    }
    if next == m_h {
        p += 1.0 - alpha;
    }
    p
}

/// Full next-mode distribution over every mode in `modes`.
pub fn bam_transition(
    alpha: f64,
    m_h: ModeId,
    m_r: ModeId,
    modes: &ModeSet,
) -> Result<BTreeMap<ModeId, f64>, AdaptationError> {
    for id in [m_h, m_r] {
        if !modes.contains(id) {
            return Err(AdaptationError::UnknownMode(id));
        }
    }
    Ok(modes
        .ids()
        .map(|next| (next, bam_probability(alpha, m_h, m_r, next)))
        .collect())
}
