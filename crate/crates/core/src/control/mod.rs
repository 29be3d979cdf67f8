//! Teleoperation mapping, speed-limit buttons and the arbitration state
//! machine that hands control between the operator and autonomy.

mod arbitration;
mod teleop;

pub use arbitration::{
    arbitrate, ArbitrationConfig, ArbitrationState, CommandSource, ControlEvent, Directive,
    PlannedRoute, DEFAULT_EPSILON, DEFAULT_RELEASE_TICKS,
};
pub use teleop::{
    adjust_speed, joystick_to_twist, JoystickInput, SpeedDirection, SpeedLimits, SpeedTarget,
    SPEED_CEILING, SPEED_FLOOR,
};
