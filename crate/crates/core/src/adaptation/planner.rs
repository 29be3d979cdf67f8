use super::{bam_probability, reward, AdaptationBelief, RewardConfig, ALPHA_SUPPORT};
use crate::nav::{ModeId, ModeSet};

/// Default planning horizon in decision steps.
pub const DEFAULT_HORIZON: usize = 3;

const TIE_TOLERANCE: f64 = 1e-12;

/// Expected discounted reward of holding robot mode `m_r` for `horizon` steps,
/// with the operator's mode evolving under the adaptation model and the
/// adaptability marginalized over the belief.
///
/// The operator starts in `belief.current_m_h`; callers must set it.
pub fn expected_return(
    belief: &AdaptationBelief,
    modes: &ModeSet,
    m_r: ModeId,
    horizon: usize,
    config: &RewardConfig,
) -> f64 {
    let m_h = belief
        .current_m_h
        .expect("expected_return needs a known operator mode");
    let ids: Vec<ModeId> = modes.ids().collect();
    let rewards: Vec<f64> = ids
        .iter()
        .map(|&h| reward(m_r, h, modes, false, config).expect("ids come from the mode set"))
        .collect();

    let mut total = 0.0;
    for (alpha, weight) in ALPHA_SUPPORT.iter().zip(belief.alpha_probs) {
        if weight == 0.0 {
            continue;
        }
        let mut dist: Vec<f64> = ids.iter().map(|&h| if h == m_h { 1.0 } else { 0.0 }).collect();
        let mut discount = 1.0;
        let mut value = 0.0;
        for _ in 0..horizon {
            value += discount * dist.iter().zip(&rewards).map(|(p, r)| p * r).sum::<f64>();
            dist = ids
                .iter()
                .map(|&next| {
                    ids.iter()
                        .zip(&dist)
                        .map(|(&from, p)| p * bam_probability(*alpha, from, m_r, next))
                        .sum()
                })
                .collect();
            discount *= config.beta;
        }
        total += weight * value;
    }
    total
}

/// Robot mode maximizing expected discounted reward over the horizon.
///
/// Falls back to the optimal mode when the operator's mode is unknown. Ties
/// go to the operator's mode, then to the lowest id.
pub fn plan_mode(
    belief: &AdaptationBelief,
    modes: &ModeSet,
    horizon: usize,
    config: &RewardConfig,
) -> ModeId {
    if modes.len() == 1 {
        return modes.modes[0].id;
    }
    let Some(m_h) = belief.current_m_h.filter(|&h| modes.contains(h)) else {
        return modes.optimal_id;
    };
    let horizon = horizon.max(1);

    let mut order: Vec<ModeId> = modes.ids().filter(|&id| id != m_h).collect();
    order.sort_unstable();
    order.insert(0, m_h);

    let mut best = (m_h, expected_return(belief, modes, m_h, horizon, config));
    for &id in &order[1..] {
        let v = expected_return(belief, modes, id, horizon, config);
        if v > best.1 + TIE_TOLERANCE * best.1.abs().max(1.0) {
            best = (id, v);
        }
    }
    best.0
}
