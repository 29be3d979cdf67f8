use serde::{Deserialize, Serialize};

use super::HistoryWindow;
use crate::nav::{ModeId, ModeSet, Path};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InferConfig {
    /// Lead in cumulative approach (meters) the winning mode needs.
    pub margin: f64,
    /// Pull above which a sample counts as active.
    pub epsilon: f64,
}

impl Default for InferConfig {
    fn default() -> Self {
        Self {
            margin: 0.05,
            epsilon: crate::control::DEFAULT_EPSILON,
        }
    }
}

fn segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    (p.0 - (a.0 + t * dx)).hypot(p.1 - (a.1 + t * dy))
}

/// Euclidean distance from a point to a path polyline.
pub fn distance_to_path(path: &Path, x: f64, y: f64) -> f64 {
    match path.waypoints.as_slice() {
        [] => f64::INFINITY,
        [w] => (w.0 - x).hypot(w.1 - y),
        ws => ws
            .windows(2)
            .map(|s| segment_distance((x, y), s[0], s[1]))
            .fold(f64::INFINITY, f64::min),
    }
}

/// Cumulative decrease in distance to each mode's path over consecutive
/// active samples, in `modes` order.
pub fn cumulative_approach(history: &HistoryWindow, modes: &ModeSet, epsilon: f64) -> Vec<f64> {
    let samples: Vec<_> = history.iter().collect();
    modes
        .modes
        .iter()
        .map(|m| {
            samples
                .windows(2)
                .filter(|w| w[1].stick.pull > epsilon && w[1].tick == w[0].tick + 1)
                .map(|w| {
                    distance_to_path(&m.path, w[0].pose.x, w[0].pose.y)
                        - distance_to_path(&m.path, w[1].pose.x, w[1].pose.y)
                })
                .sum()
        })
        .collect()
}

/// Which candidate the operator's recent steering heads toward, if any.
///
/// Needs at least `k/2` active samples; the winner must lead every other
/// mode's cumulative approach by more than the margin.
pub fn infer_mode(history: &HistoryWindow, modes: &ModeSet, config: &InferConfig) -> Option<ModeId> {
    let active = history.iter().filter(|s| s.stick.pull > config.epsilon).count();
    if history.is_empty() || modes.is_empty() || 2 * active < history.k() {
        return None;
    }
    if modes.len() == 1 {
        return Some(modes.modes[0].id);
    }
    let approach = cumulative_approach(history, modes, config.epsilon);
    let (best, &best_val) = approach
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))?;
    let runner_up = approach
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != best)
        .map(|(_, &v)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    (best_val - runner_up > config.margin).then(|| modes.modes[best].id)
}
