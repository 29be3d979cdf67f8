use serde::{Deserialize, Serialize};

use crate::sim::Twist2D;

/// Lower bound for either speed limit.
pub const SPEED_FLOOR: f64 = 0.01;
/// Upper bound for either speed limit.
pub const SPEED_CEILING: f64 = 5.0;

/// Active maximum linear (m/s) and angular (rad/s) speeds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpeedLimits {
    pub v_max: f64,
    pub omega_max: f64,
}

impl SpeedLimits {
    /// Builds limits clamped into `[SPEED_FLOOR, SPEED_CEILING]`.
    pub fn new(v_max: f64, omega_max: f64) -> Self {
        Self {
            v_max: clamp_limit(v_max),
            omega_max: clamp_limit(omega_max),
        }
    }
}

impl Default for SpeedLimits {
    fn default() -> Self {
        Self {
            v_max: 0.5,
            omega_max: 1.0,
        }
    }
}

fn clamp_limit(v: f64) -> f64 {
    if v.is_nan() {
        SPEED_FLOOR
    } else {
        v.clamp(SPEED_FLOOR, SPEED_CEILING)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpeedTarget {
    Linear,
    Angular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpeedDirection {
    Up,
    Down,
}

/// Scales one limit by ±10% of its current value, clamped.
pub fn adjust_speed(limits: SpeedLimits, target: SpeedTarget, direction: SpeedDirection) -> SpeedLimits {
    let factor = match direction {
        SpeedDirection::Up => 1.1,
        SpeedDirection::Down => 0.9,
    };
    match target {
        SpeedTarget::Linear => SpeedLimits {
            v_max: clamp_limit(limits.v_max * factor),
            ..limits
        },
        SpeedTarget::Angular => SpeedLimits {
            omega_max: clamp_limit(limits.omega_max * factor),
            ..limits
        },
    }
}

/// Stick state: radial pull in `[0, 1]` and bearing counterclockwise from "up".
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct JoystickInput {
    pub pull: f64,
    pub bearing: f64,
}

impl JoystickInput {
    pub const RELEASED: JoystickInput = JoystickInput {
        pull: 0.0,
        bearing: 0.0,
    };

    pub fn new(pull: f64, bearing: f64) -> Self {
        let pull = if pull.is_nan() { 0.0 } else { pull.clamp(0.0, 1.0) };
        let bearing = if bearing.is_finite() { bearing } else { 0.0 };
        Self { pull, bearing }
    }

    /// The stick position that would produce `twist` under `limits`
    /// (saturating at full pull).
    pub fn from_twist(twist: Twist2D, limits: &SpeedLimits) -> Self {
        let fwd = twist.v / limits.v_max;
        let turn = twist.omega / limits.omega_max;
        let pull = fwd.hypot(turn);
        if !(pull.is_finite()) || pull == 0.0 {
            return Self::RELEASED;
        }
        Self::new(pull, turn.atan2(fwd))
    }
}

/// Maps the stick to a velocity command: pull scales the limits, the bearing
/// splits it between forward and turning.
pub fn joystick_to_twist(input: &JoystickInput, limits: &SpeedLimits) -> Twist2D {
    let pull = JoystickInput::new(input.pull, input.bearing);
    Twist2D::new(
        pull.pull * limits.v_max * pull.bearing.cos(),
        pull.pull * limits.omega_max * pull.bearing.sin(),
    )
}
