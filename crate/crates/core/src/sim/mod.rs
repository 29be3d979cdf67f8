//! Deterministic fixed-tick world: occupancy grid, unicycle kinematics and
//! disc-footprint collision handling.

mod grid;
mod scenario;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use grid::{Cell, OccupancyGrid};
pub use scenario::{load_scenario, load_scenario_file, NamedGoal, Scenario};

/// Default integration step in seconds.
pub const DEFAULT_DT: f64 = 0.05;
/// Default disc footprint radius in meters.
pub const DEFAULT_ROBOT_RADIUS: f64 = 0.15;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("cannot read scenario {path}: {reason}")]
    Io { path: String, reason: String },
}

/// Wraps an angle into `[−π, π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let mut r = (theta + PI).rem_euclid(2.0 * PI) - PI;
    // rem_euclid may round up to exactly 2π
    if r >= PI {
        r -= 2.0 * PI;
    }
    if r < -PI {
        r = -PI;
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose2D {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl Pose2D {
    /// Builds a pose with the heading wrapped into `[−π, π)`.
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Self {
            x,
            y,
            theta: wrap_angle(theta),
        }
    }

    pub fn distance_to(&self, x: f64, y: f64) -> f64 {
        (self.x - x).hypot(self.y - y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Twist2D {
    pub v: f64,
    pub omega: f64,
}

impl Twist2D {
    pub const ZERO: Twist2D = Twist2D { v: 0.0, omega: 0.0 };

    pub fn new(v: f64, omega: f64) -> Self {
        Self { v, omega }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorldState {
    pub pose: Pose2D,
    pub tick: u64,
    pub collided: bool,
}

impl WorldState {
    pub fn at(pose: Pose2D) -> Self {
        Self {
            pose,
            tick: 0,
            collided: false,
        }
    }
}

/// True iff `(x, y)` is off the map or an occupied cell center lies within `radius`.
pub fn check_collision(grid: &OccupancyGrid, pose: &Pose2D, radius: f64) -> bool {
    if !(pose.x.is_finite() && pose.y.is_finite()) || !grid.in_bounds(pose.x, pose.y) {
        return true;
    }
    grid.occupied_within(pose.x, pose.y, radius)
}

/// One explicit-Euler unicycle step.
///
/// On contact the position reverts, the heading update is kept and `collided`
/// is set. The tick always advances.
pub fn step(
    state: &WorldState,
    cmd: Twist2D,
    dt: f64,
    grid: &OccupancyGrid,
    radius: f64,
) -> WorldState {
    debug_assert!(dt > 0.0, "dt must be positive");
    if cmd == Twist2D::ZERO {
        return WorldState {
            tick: state.tick + 1,
            ..*state
        };
    }
    let p = state.pose;
    let theta = wrap_angle(p.theta + cmd.omega * dt);
    let moved = Pose2D {
        x: p.x + cmd.v * p.theta.cos() * dt,
        y: p.y + cmd.v * p.theta.sin() * dt,
        theta,
    };
    let (pose, collided) = if cmd.v != 0.0 && check_collision(grid, &moved, radius) {
        (Pose2D { x: p.x, y: p.y, theta }, true)
    } else {
        (moved, false)
    };
    WorldState {
        pose,
        tick: state.tick + 1,
        collided,
    }
}
