use serde::{Deserialize, Serialize};

use super::Path;
use crate::control::SpeedLimits;
use crate::sim::{wrap_angle, Twist2D, WorldState};

/// Carrot-following controller constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FollowConfig {
    /// Carrot distance in meters.
    pub lookahead: f64,
    /// Proportional heading gain.
    pub gain: f64,
    /// Stop radius around the final waypoint, meters.
    pub goal_tolerance: f64,
}

impl Default for FollowConfig {
    fn default() -> Self {
        Self {
            lookahead: 0.3,
            gain: 2.0,
            goal_tolerance: 0.1,
        }
    }
}

/// Index of the waypoint closest to `(x, y)`; the earliest one on ties.
pub fn nearest_waypoint(path: &Path, x: f64, y: f64) -> usize {
    path.waypoints
        .iter()
        .enumerate()
        .map(|(i, &(wx, wy))| (i, (wx - x).hypot(wy - y)))
        .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
        .0
}

pub fn at_goal(state: &WorldState, path: &Path, config: &FollowConfig) -> bool {
    path.final_waypoint()
        .is_some_and(|(gx, gy)| state.pose.distance_to(gx, gy) <= config.goal_tolerance)
}

/// Point `lookahead` meters further along `path` than the projection of
/// `(x, y)` onto it, or the final waypoint when the path ends sooner.
pub fn carrot_point(path: &Path, x: f64, y: f64, lookahead: f64) -> Option<(f64, f64)> {
    let w = &path.waypoints;
    let last = *w.last()?;
    if w.len() == 1 {
        return Some(last);
    }
    let mut best = (0, 0.0, f64::INFINITY);
    for i in 0..w.len() - 1 {
        let (a, b) = (w[i], w[i + 1]);
        let (dx, dy) = (b.0 - a.0, b.1 - a.1);
        let len2 = dx * dx + dy * dy;
        let t = if len2 == 0.0 {
            0.0
        } else {
            (((x - a.0) * dx + (y - a.1) * dy) / len2).clamp(0.0, 1.0)
        };
        let d = (x - (a.0 + t * dx)).hypot(y - (a.1 + t * dy));
        if d < best.2 {
            best = (i, t, d);
        }
    }
    let (seg, t, _) = best;
    let (a, b) = (w[seg], w[seg + 1]);
    let mut from = (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1));
    let mut remaining = lookahead;
    for &to in &w[seg + 1..] {
        let len = (to.0 - from.0).hypot(to.1 - from.1);
        if len >= remaining && len > 0.0 {
            let f = remaining / len;
            return Some((from.0 + f * (to.0 - from.0), from.1 + f * (to.1 - from.1)));
        }
        remaining -= len;
        from = to;
    }
    Some(last)
}

/// Velocity command steering toward the carrot point on `path`.
pub fn follow_path(
    state: &WorldState,
    path: &Path,
    limits: &SpeedLimits,
    config: &FollowConfig,
) -> Twist2D {
    let Some((gx, gy)) = path.final_waypoint() else {
        return Twist2D::ZERO;
    };
    let pose = &state.pose;
    if pose.distance_to(gx, gy) <= config.goal_tolerance {
        return Twist2D::ZERO;
    }
    let (tx, ty) = carrot_point(path, pose.x, pose.y, config.lookahead).unwrap_or((gx, gy));
    let error = wrap_angle((ty - pose.y).atan2(tx - pose.x) - pose.theta);
    let omega = (config.gain * error).clamp(-limits.omega_max, limits.omega_max);
    let v = limits.v_max * error.cos().max(0.0);
    Twist2D::new(v, omega)
}
