use serde::{Deserialize, Serialize};

use super::JoystickInput;
use crate::nav::{ModeId, Path};
use crate::sim::Pose2D;

/// Stick pull at or below this counts as "hands off".
pub const DEFAULT_EPSILON: f64 = 0.05;
/// Quiet ticks in override before the saved goal is republished.
pub const DEFAULT_RELEASE_TICKS: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArbitrationConfig {
    pub epsilon: f64,
    pub release_ticks: u32,
}

impl Default for ArbitrationConfig {
    fn default() -> Self {
        Self {
            epsilon: DEFAULT_EPSILON,
            release_ticks: DEFAULT_RELEASE_TICKS,
        }
    }
}

/// Who commands the robot.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum ArbitrationState {
    #[default]
    Idle,
    Teleop {
        stick: JoystickInput,
    },
    /// Following a goal. `mode_id`/`path` are empty until a plan arrives.
    Autonomous {
        goal: Pose2D,
        mode_id: Option<ModeId>,
        path: Option<Path>,
    },
    /// The operator took over from autonomy; `saved_goal` is the goal that
    /// was active when the takeover began.
    Override {
        saved_goal: Pose2D,
        quiet_ticks: u32,
        stick: JoystickInput,
    },
}

impl ArbitrationState {
    pub fn name(&self) -> &'static str {
        match self {
            ArbitrationState::Idle => "idle",
            ArbitrationState::Teleop { .. } => "teleop",
            ArbitrationState::Autonomous { .. } => "autonomous",
            ArbitrationState::Override { .. } => "override",
        }
    }

    /// The navigation goal in force, if any.
    pub fn goal(&self) -> Option<Pose2D> {
        match self {
            ArbitrationState::Autonomous { goal, .. } => Some(*goal),
            ArbitrationState::Override { saved_goal, .. } => Some(*saved_goal),
            _ => None,
        }
    }
}

/// A plan produced for a goal request.
#[derive(Debug, Clone, PartialEq)]
pub struct PlannedRoute {
    pub goal: Pose2D,
    pub mode_id: ModeId,
    pub path: Path,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ControlEvent {
    Joystick(JoystickInput),
    GoalClick(Pose2D),
    CancelGoal,
    PlanReady(Box<PlannedRoute>),
    Tick,
}

/// What the main loop should do in response to an event.
///
/// Motion directives (`ApplyJoystick`, `FollowPath`, `Hold`) are only
/// produced by [`ControlEvent::Tick`], so each tick has one command source.
#[derive(Debug, Clone, PartialEq)]
pub enum Directive {
    None,
    ApplyJoystick(JoystickInput),
    FollowPath,
    Hold,
    Stop,
    RequestPlan(Pose2D),
    RepublishGoal(Pose2D),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandSource {
    Joystick,
    Autonomy,
}

impl Directive {
    pub fn source(&self) -> Option<CommandSource> {
        match self {
            Directive::ApplyJoystick(_) => Some(CommandSource::Joystick),
            Directive::FollowPath => Some(CommandSource::Autonomy),
            _ => None,
        }
    }
}

/// The shared-control transition function. Total over every state/event pair.
pub fn arbitrate(
    state: &ArbitrationState,
    event: &ControlEvent,
    config: &ArbitrationConfig,
) -> (ArbitrationState, Directive) {
    use ArbitrationState as S;
    use ControlEvent as E;

    match (state, event) {
        (_, E::CancelGoal) => (S::Idle, Directive::Stop),
        (_, E::GoalClick(goal)) => (
            S::Autonomous {
                goal: *goal,
                mode_id: None,
                path: None,
            },
            Directive::RequestPlan(*goal),
        ),

        (S::Idle | S::Teleop { .. }, E::Joystick(stick)) => {
            (S::Teleop { stick: *stick }, Directive::None)
        }
        (S::Autonomous { goal, .. }, E::Joystick(stick)) if stick.pull > config.epsilon => (
            S::Override {
                saved_goal: *goal,
                quiet_ticks: 0,
                stick: *stick,
            },
            Directive::None,
        ),
        (S::Autonomous { .. }, E::Joystick(_)) => (state.clone(), Directive::None),
        (
            S::Override {
                saved_goal,
                quiet_ticks,
                ..
            },
            E::Joystick(stick),
        ) => {
            let quiet_ticks = if stick.pull > config.epsilon { 0 } else { *quiet_ticks };
            (
                S::Override {
                    saved_goal: *saved_goal,
                    quiet_ticks,
                    stick: *stick,
                },
                Directive::None,
            )
        }

        (S::Autonomous { goal, .. }, E::PlanReady(plan)) if plan.goal == *goal => (
            S::Autonomous {
                goal: *goal,
                mode_id: Some(plan.mode_id),
                path: Some(plan.path.clone()),
            },
            Directive::None,
        ),
        (_, E::PlanReady(_)) => (state.clone(), Directive::None),

        (S::Idle, E::Tick) => (S::Idle, Directive::Hold),
        (S::Teleop { stick }, E::Tick) => (state.clone(), Directive::ApplyJoystick(*stick)),
        (S::Autonomous { path, .. }, E::Tick) => {
            let d = if path.is_some() {
                Directive::FollowPath
            } else {
                Directive::Hold
            };
            (state.clone(), d)
        }
        (
            S::Override {
                saved_goal,
                quiet_ticks,
                stick,
            },
            E::Tick,
        ) => {
            if stick.pull > config.epsilon {
                (
                    S::Override {
                        saved_goal: *saved_goal,
                        quiet_ticks: 0,
                        stick: *stick,
                    },
                    Directive::ApplyJoystick(*stick),
                )
            } else if quiet_ticks + 1 >= config.release_ticks {
                (
                    S::Autonomous {
                        goal: *saved_goal,
                        mode_id: None,
                        path: None,
                    },
                    Directive::RepublishGoal(*saved_goal),
                )
            } else {
                (
                    S::Override {
                        saved_goal: *saved_goal,
                        quiet_ticks: quiet_ticks + 1,
                        stick: *stick,
                    },
                    Directive::Hold,
                )
            }
        }
    }
}
