use sharenav_core::adaptation::*;
use sharenav_core::nav::{candidate_modes, Mode, ModeSet, Path};
use sharenav_core::sim::{Cell, OccupancyGrid};

use super::*;

pub fn synthetic_modes(costs: &[usize]) -> ModeSet {
    // straight rows of the requested lengths; cost = cells - 1
    let width = costs.iter().max().unwrap() + 1;
    let grid = OccupancyGrid::open(width, costs.len(), 1.0).unwrap();
    ModeSet::new(
        costs
            .iter()
            .enumerate()
            .map(|(id, &c)| Mode {
                id,
                path: Path::from_cells(&grid, (0..=c).map(|col| Cell::new(id, col)).collect()),
                label: format!("m{id}"),
            })
            .collect(),
    )
}

pub fn fixture_modes() -> ModeSet {
    let s = fixture();
    candidate_modes(&s.grid, &s.start, &s.goals[0].pose, s.robot_radius).unwrap()
}

pub fn bam_sweep_matches_switching_rule() {
    for n in 2..=3 {
        let modes = synthetic_modes(&vec![4; n]);
        for step in 0..=10 {
            let alpha = step as f64 / 10.0;
            for m_h in 0..n {
                for m_r in 0..n {
                    let dist = bam_transition(alpha, m_h, m_r, &modes).unwrap();
                    let total: f64 = dist.values().sum();
                    assert!((total - 1.0).abs() <= 1e-12);
                    for next in 0..n {
                        // adopt the robot's mode with probability alpha, keep one's own otherwise
                        let expected = if m_h == m_r {
                            f64::from(u8::from(next == m_h))
                        } else if next == m_r {
                            alpha
                        } else if next == m_h {
                            1.0 - alpha
                        } else {
                            0.0
                        };
                        assert!((dist[&next] - expected).abs() <= 1e-12, "α={alpha} {m_h}->{next} vs {m_r}");
                    }
                }
            }
        }
    }
    let modes = synthetic_modes(&[4, 4]);
    assert_eq!(bam_transition(0.5, 0, 7, &modes), Err(AdaptationError::UnknownMode(7)));
}

pub fn bayes_chains_from_uniform() {
    let (right, left) = (0, 1);
    let comply1 = update_belief(&AdaptationBelief::uniform(), right, left, right);
    let comply2 = update_belief(&comply1, right, left, right);
    let refuse = update_belief(&AdaptationBelief::uniform(), left, left, right);
    // posterior ∝ prior · α on comply, ∝ prior · (1 − α) on refuse
    let expect1 = [0.0, 0.1, 0.2, 0.3, 0.4];
    let expect2 = [0.0, 1.0 / 30.0, 4.0 / 30.0, 9.0 / 30.0, 16.0 / 30.0];
    let expect_refuse = [0.4, 0.3, 0.2, 0.1, 0.0];
    for i in 0..5 {
        assert!((comply1.alpha_probs[i] - expect1[i]).abs() <= 1e-9);
        assert!((comply2.alpha_probs[i] - expect2[i]).abs() <= 1e-9);
        assert!((refuse.alpha_probs[i] - expect_refuse[i]).abs() <= 1e-9);
    }
    assert!(comply2.mass_at_least(0.75) >= 0.8);
    assert_eq!(refuse.current_m_h, Some(left));
}

pub fn planner_equals_enumeration() {
    let cfg = RewardConfig::default();
    let mut beliefs: Vec<[f64; 5]> = (0..5).map(|i| AdaptationBelief::point_mass(i).alpha_probs).collect();
    beliefs.push(AdaptationBelief::uniform().alpha_probs);
    beliefs.push(AdaptationBelief::adaptable().alpha_probs);
    let sets = [fixture_modes(), synthetic_modes(&[10, 14]), synthetic_modes(&[6, 30]), synthetic_modes(&[5, 5])];
    for modes in &sets {
        let costs: Vec<f64> = modes.modes.iter().map(|m| m.path.cost).collect();
        for horizon in 1..=4 {
            for probs in &beliefs {
                for m_h in 0..2 {
                    let belief = AdaptationBelief { alpha_probs: *probs, current_m_h: Some(m_h) };
                    let values: Vec<f64> = (0..2)
                        .map(|m_r| enumerate_value(probs, &costs, m_h, m_r, horizon, cfg.beta, cfg.w_disagree, cfg.cost_scale))
                        .collect();
                    for m_r in 0..2 {
                        let v = expected_return(&belief, modes, m_r, horizon, &cfg);
                        assert!((v - values[m_r]).abs() < 1e-12, "H={horizon} {probs:?}");
                    }
                    let other = 1 - m_h;
                    let expected = if values[other] > values[m_h] + 1e-12 * values[m_h].abs().max(1.0) { other } else { m_h };
                    assert_eq!(plan_mode(&belief, modes, horizon, &cfg), expected, "H={horizon} {probs:?} m_h={m_h}");
                }
            }
        }
    }
}

pub fn comply_with_insistent_operator() {
    let modes = fixture_modes();
    let cfg = RewardConfig::default();
    let (right, left) = (modes.by_label("right").unwrap().id, modes.by_label("left").unwrap().id);
    let decide = |i: usize| plan_mode(&AdaptationBelief::point_mass(i).with_mode(Some(left)), &modes, 3, &cfg);
    assert_eq!(decide(0), left);
    assert_eq!(decide(4), right);
    // monotone: once the optimal mode wins it keeps winning as α grows
    let decisions: Vec<_> = (0..5).map(decide).collect();
    let first_right = decisions.iter().position(|&d| d == right).unwrap();
    assert!(decisions[first_right..].iter().all(|&d| d == right));
    assert!(decisions[..first_right].iter().all(|&d| d == left));

    let prior = AdaptationBelief::adaptable().with_mode(Some(left));
    assert_eq!(plan_mode(&prior, &modes, 3, &cfg), right);
    let after_refusal = update_belief(&prior, left, left, right);
    assert_eq!(plan_mode(&after_refusal, &modes, 3, &cfg), left);
    assert_eq!(plan_mode(&AdaptationBelief::uniform().with_mode(Some(left)), &modes, 3, &cfg), right);
}
