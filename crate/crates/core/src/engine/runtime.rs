use crate::adaptation::{
    infer_mode, plan_mode, update_belief, AdaptationBelief, HistorySample, HistoryWindow,
};
use crate::bridge::{
    ArbitrationName, CmdVelMsg, GoalMsg, InboundCommand, LimitsMsg, MapMsg, ModeStateMsg, Payload,
    PlanMsg, PoseMsg, MODE_STATE, PLAN, ROBOT_POSE,
};
use crate::control::{
    adjust_speed, arbitrate, joystick_to_twist, ArbitrationState, CommandSource, ControlEvent,
    Directive, JoystickInput, PlannedRoute, SpeedLimits,
};
use crate::nav::{
    at_goal, candidate_modes_from_cells, follow_path, nearest_free_cell, nearest_waypoint,
    plan_cells, Connectivity, Mode, ModeId, ModeSet, NavError, Path,
};
use crate::sim::{step, Cell, Pose2D, Scenario, Twist2D, WorldState};

use super::{EngineError, EngineSettings};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanReason {
    NewGoal,
    Republish,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EngineEvent {
    Planned {
        reason: PlanReason,
        mode_id: ModeId,
        label: String,
    },
    PlanFailed(String),
    /// The adaptability belief absorbed an observation of the operator's mode.
    BeliefUpdated { observed: ModeId },
    OverrideStarted,
    GoalReached,
    Collision,
}

/// What happened during one tick.
#[derive(Debug, Clone, PartialEq)]
pub struct TickReport {
    /// Tick number after the step.
    pub tick: u64,
    /// Every directive issued by the arbitration during the tick.
    pub directives: Vec<Directive>,
    /// The directive that selected this tick's command.
    pub motion: Directive,
    pub command: Twist2D,
    pub events: Vec<EngineEvent>,
    pub publications: Vec<(&'static str, Payload)>,
}

impl TickReport {
    pub fn command_sources(&self) -> Vec<CommandSource> {
        self.directives.iter().filter_map(Directive::source).collect()
    }
}

#[derive(Debug, Clone)]
struct ActiveModes {
    goal_cell: Cell,
    set: ModeSet,
}

/// Authoritative simulation state. Only [`Engine::tick`] and the episode
/// helpers mutate it.
pub struct Engine {
    scenario: Scenario,
    settings: EngineSettings,
    blocked: Vec<bool>,
    world: WorldState,
    arbitration: ArbitrationState,
    limits: SpeedLimits,
    belief: AdaptationBelief,
    history: HistoryWindow,
    modes: Option<ActiveModes>,
    m_r: Option<ModeId>,
    plan_count: u64,
    overridden_since_plan: bool,
    goal_reached: bool,
}

impl Engine {
    /// Builds the engine and the reference mode set from the start pose to
    /// the first goal.
    pub fn new(scenario: Scenario, settings: EngineSettings) -> Result<Self, EngineError> {
        scenario.validate()?;
        let blocked = scenario.grid.inflate(scenario.robot_radius);
        let mut engine = Self {
            world: WorldState::at(scenario.start),
            limits: scenario.speed_limits,
            belief: settings.prior.belief(),
            history: HistoryWindow::new(settings.history_len.max(1)),
            arbitration: ArbitrationState::Idle,
            modes: None,
            m_r: None,
            plan_count: 0,
            overridden_since_plan: false,
            goal_reached: false,
            blocked,
            scenario,
            settings,
        };
        let goal = engine.scenario.goals[0].pose;
        let start = engine.scenario.start;
        engine.modes = Some(engine.compute_modes(&start, &goal)?);
        Ok(engine)
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn settings(&self) -> &EngineSettings {
        &self.settings
    }

    pub fn world(&self) -> &WorldState {
        &self.world
    }

    pub fn arbitration(&self) -> &ArbitrationState {
        &self.arbitration
    }

    pub fn limits(&self) -> SpeedLimits {
        self.limits
    }

    pub fn belief(&self) -> &AdaptationBelief {
        &self.belief
    }

    pub fn history(&self) -> &HistoryWindow {
        &self.history
    }

    pub fn modes(&self) -> Option<&ModeSet> {
        self.modes.as_ref().map(|m| &m.set)
    }

    /// The robot's current mode decision.
    pub fn m_r(&self) -> Option<ModeId> {
        self.m_r
    }

    /// Number of successful plans so far.
    pub fn plan_count(&self) -> u64 {
        self.plan_count
    }

    pub fn goal_reached(&self) -> bool {
        self.goal_reached
    }

    pub fn path(&self) -> Option<&Path> {
        match &self.arbitration {
            ArbitrationState::Autonomous { path, .. } => path.as_ref(),
            _ => None,
        }
    }

    pub fn set_belief(&mut self, belief: AdaptationBelief) {
        self.belief = belief;
    }

    /// Puts the robot back at the scenario start for a new episode. The
    /// belief, the mode set and the tick counter persist.
    pub fn reset_episode(&mut self) {
        self.world = WorldState {
            pose: self.scenario.start,
            tick: self.world.tick,
            collided: false,
        };
        self.arbitration = ArbitrationState::Idle;
        self.history.clear();
        self.m_r = None;
        self.overridden_since_plan = false;
        self.goal_reached = false;
    }

    pub fn map_message(&self) -> MapMsg {
        let g = &self.scenario.grid;
        MapMsg {
            width: g.width(),
            height: g.height(),
            resolution: g.resolution(),
            data: g.cells().iter().map(|&c| u8::from(c)).collect(),
        }
    }

    pub fn pose_message(&self) -> PoseMsg {
        let p = self.world.pose;
        PoseMsg {
            x: p.x,
            y: p.y,
            theta: p.theta,
            stamp_ms: (self.world.tick as f64 * self.settings.dt * 1000.0).round() as u64,
        }
    }

    pub fn mode_state_message(&self) -> ModeStateMsg {
        let arbitration = match self.arbitration {
            ArbitrationState::Idle => ArbitrationName::Idle,
            ArbitrationState::Teleop { .. } => ArbitrationName::Teleop,
            ArbitrationState::Autonomous { .. } => ArbitrationName::Autonomous,
            ArbitrationState::Override { .. } => ArbitrationName::Override,
        };
        ModeStateMsg {
            arbitration,
            goal: self.arbitration.goal().map(|g| GoalMsg {
                x: g.x,
                y: g.y,
                theta: g.theta,
            }),
            alpha_probs: self.belief.alpha_probs,
            m_h: self.belief.current_m_h,
            m_r: self.m_r,
            limits: LimitsMsg {
                v_max: self.limits.v_max,
                omega_max: self.limits.omega_max,
            },
        }
    }

    fn plan_message(&self, mode: &Mode, path: &Path) -> PlanMsg {
        PlanMsg {
            mode_id: mode.id,
            label: mode.label.clone(),
            waypoints: path.waypoints.iter().map(|&(x, y)| [x, y]).collect(),
        }
    }

    fn stick_from(&self, msg: &CmdVelMsg) -> JoystickInput {
        match (msg.pull, msg.bearing) {
            (Some(pull), Some(bearing)) => JoystickInput::new(pull, bearing),
            _ => JoystickInput::from_twist(Twist2D::new(msg.v, msg.omega), &self.limits),
        }
    }

    /// Grid cell for a world point, snapped to the nearest traversable cell.
    fn free_cell(&self, x: f64, y: f64) -> Result<Cell, NavError> {
        let grid = &self.scenario.grid;
        match grid.cell_at(x, y) {
            Some(c) if !self.blocked[grid.index(c)] => Ok(c),
            _ => nearest_free_cell(grid, &self.blocked, x, y)
                .ok_or_else(|| NavError::InvalidEndpoint("no traversable cell".into())),
        }
    }

    fn goal_cell(&self, goal: &Pose2D) -> Result<Cell, NavError> {
        let grid = &self.scenario.grid;
        let cell = grid
            .cell_at(goal.x, goal.y)
            .ok_or_else(|| NavError::InvalidEndpoint(format!("goal ({}, {}) is outside the map", goal.x, goal.y)))?;
        if self.blocked[grid.index(cell)] {
            return Err(NavError::InvalidEndpoint(format!(
                "goal ({}, {}) is not traversable",
                goal.x, goal.y
            )));
        }
        Ok(cell)
    }

    fn compute_modes(&self, from: &Pose2D, goal: &Pose2D) -> Result<ActiveModes, NavError> {
        let start = self.free_cell(from.x, from.y)?;
        let goal_cell = self.goal_cell(goal)?;
        let set = candidate_modes_from_cells(&self.scenario.grid, &self.blocked, start, goal_cell)?;
        Ok(ActiveModes { goal_cell, set })
    }

    /// Route from the current pose onto `mode`: shortest path to its nearest
    /// waypoint, then the rest of the mode.
    fn splice(&self, mode: &Mode) -> Result<Path, NavError> {
        let grid = &self.scenario.grid;
        let pose = self.world.pose;
        let here = self.free_cell(pose.x, pose.y)?;
        let j = nearest_waypoint(&mode.path, pose.x, pose.y);
        let head = plan_cells(grid, &self.blocked, here, mode.path.cells[j], Connectivity::Eight)?;
        let tail = Path::from_cells(grid, mode.path.cells[j..].to_vec());
        Ok(head.join(grid, &tail))
    }

    fn replan(
        &mut self,
        goal: Pose2D,
        reason: PlanReason,
        events: &mut Vec<EngineEvent>,
    ) -> Result<(PlannedRoute, PlanMsg), NavError> {
        if reason == PlanReason::NewGoal {
            let goal_cell = self.goal_cell(&goal)?;
            let reusable = self.modes.as_ref().is_some_and(|m| m.goal_cell == goal_cell);
            if !reusable {
                let fresh = self.compute_modes(&self.world.pose, &goal)?;
                // carry the operator mode across sets by label
                let carried = self.belief.current_m_h.and_then(|h| {
                    let label = self.modes.as_ref()?.set.get(h)?.label.clone();
                    fresh.set.by_label(&label).map(|m| m.id)
                });
                self.belief.current_m_h = carried;
                self.modes = Some(fresh);
            }
        }
        let modes = self.modes.clone().expect("mode set exists after goal handling").set;

        if let Some(observed) = infer_mode(&self.history, &modes, &self.settings.infer) {
            match (reason, self.belief.current_m_h, self.m_r) {
                (PlanReason::Republish, Some(h_prev), Some(r_prev)) => {
                    self.belief = update_belief(&self.belief, observed, h_prev, r_prev);
                    events.push(EngineEvent::BeliefUpdated { observed });
                }
                _ => self.belief.current_m_h = Some(observed),
            }
            // each sample counts as evidence once
            self.history.clear();
        }

        let m_r = plan_mode(&self.belief, &modes, self.settings.horizon, &self.settings.reward);
        let mode = modes.get(m_r).expect("planner returns a member mode");
        let path = self.splice(mode)?;
        let msg = self.plan_message(mode, &path);
        events.push(EngineEvent::Planned {
            reason,
            mode_id: m_r,
            label: mode.label.clone(),
        });
        self.m_r = Some(m_r);
        self.plan_count += 1;
        self.overridden_since_plan = false;
        self.goal_reached = false;
        Ok((
            PlannedRoute {
                goal,
                mode_id: m_r,
                path,
            },
            msg,
        ))
    }

    fn apply(&mut self, event: ControlEvent, report: &mut TickReport) {
        let (next, directive) = arbitrate(&self.arbitration, &event, &self.settings.arbitration);
        if matches!(next, ArbitrationState::Override { .. })
            && !matches!(self.arbitration, ArbitrationState::Override { .. })
        {
            self.overridden_since_plan = true;
            report.events.push(EngineEvent::OverrideStarted);
        }
        self.arbitration = next;
        report.directives.push(directive.clone());
        match directive {
            Directive::RequestPlan(goal) => self.plan_and_deliver(goal, PlanReason::NewGoal, report),
            Directive::Stop => {
                self.m_r = None;
            }
            _ => {}
        }
    }

    fn plan_and_deliver(&mut self, goal: Pose2D, reason: PlanReason, report: &mut TickReport) {
        match self.replan(goal, reason, &mut report.events) {
            Ok((route, msg)) => {
                report.publications.push((PLAN, Payload::Plan(msg)));
                self.apply(ControlEvent::PlanReady(Box::new(route)), report);
            }
            Err(e) => {
                report.events.push(EngineEvent::PlanFailed(e.to_string()));
                self.apply(ControlEvent::CancelGoal, report);
            }
        }
    }

    /// Advances the world by one tick after applying queued operator input.
    pub fn tick(&mut self, inputs: impl IntoIterator<Item = InboundCommand>) -> TickReport {
        let mut report = TickReport {
            tick: self.world.tick,
            directives: Vec::new(),
            motion: Directive::Hold,
            command: Twist2D::ZERO,
            events: Vec::new(),
            publications: Vec::new(),
        };

        for input in inputs {
            match input {
                InboundCommand::SetSpeed(m) => self.limits = adjust_speed(self.limits, m.target, m.direction),
                InboundCommand::CmdVel(m) => {
                    let stick = self.stick_from(&m);
                    self.apply(ControlEvent::Joystick(stick), &mut report);
                }
                InboundCommand::Goal(g) => {
                    self.apply(ControlEvent::GoalClick(Pose2D::new(g.x, g.y, g.theta)), &mut report)
                }
                InboundCommand::CancelGoal => self.apply(ControlEvent::CancelGoal, &mut report),
            }
        }

        let (next, mut motion) = arbitrate(&self.arbitration, &ControlEvent::Tick, &self.settings.arbitration);
        self.arbitration = next;
        report.directives.push(motion.clone());
        if let Directive::RepublishGoal(goal) = motion {
            self.plan_and_deliver(goal, PlanReason::Republish, &mut report);
            motion = Directive::Hold;
        }

        let command = match &motion {
            Directive::ApplyJoystick(stick) => joystick_to_twist(stick, &self.limits),
            Directive::FollowPath => match self.path() {
                Some(path) => follow_path(&self.world, path, &self.limits, &self.settings.follow),
                None => Twist2D::ZERO,
            },
            _ => Twist2D::ZERO,
        };
        self.world = step(
            &self.world,
            command,
            self.settings.dt,
            &self.scenario.grid,
            self.scenario.robot_radius,
        );
        if self.world.collided {
            report.events.push(EngineEvent::Collision);
        }

        if let Directive::ApplyJoystick(stick) = motion {
            self.history.push(HistorySample {
                tick: self.world.tick,
                pose: self.world.pose,
                stick,
            });
        }

        if !self.goal_reached {
            let reached = self.path().is_some_and(|p| at_goal(&self.world, p, &self.settings.follow));
            if reached {
                self.goal_reached = true;
                report.events.push(EngineEvent::GoalReached);
                // riding the robot's mode to the goal counts as following it
                if let (false, Some(m_r), Some(h_prev)) =
                    (self.overridden_since_plan, self.m_r, self.belief.current_m_h)
                {
                    self.belief = update_belief(&self.belief, m_r, h_prev, m_r);
                    report.events.push(EngineEvent::BeliefUpdated { observed: m_r });
                }
            }
        }

        let tick = self.world.tick;
        if tick % self.settings.pose_period() == 0 {
            report.publications.push((ROBOT_POSE, Payload::Pose(self.pose_message())));
        }
        if tick % self.settings.mode_state_period() == 0 {
            report
                .publications
                .push((MODE_STATE, Payload::ModeState(self.mode_state_message())));
        }

        report.tick = tick;
        report.motion = motion;
        report.command = command;
        report
    }
}
