use serde::Serialize;

use crate::adaptation::SyntheticOperator;
use crate::bridge::{CmdVelMsg, GoalMsg, InboundCommand};
use crate::control::JoystickInput;
use crate::nav::{follow_path, ModeId, Path};
use crate::sim::{load_scenario_file, Scenario};

use super::{Engine, EngineError, ServerConfig};

/// Knobs of the scripted operator in closed-loop runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorScript {
    /// Teleop ticks before each goal click, revealing the preferred mode.
    pub intent_ticks: u64,
    /// Ticks between seeing the robot's plan and starting an override.
    pub reaction_ticks: u64,
    /// Length of each override.
    pub override_ticks: u64,
    /// Decisions the operator makes per episode.
    pub max_decisions: usize,
    /// Hard cap on ticks per episode.
    pub max_ticks: u64,
}

impl OperatorScript {
    pub fn for_history(k: usize) -> Self {
        Self {
            intent_ticks: 3 * k as u64,
            reaction_ticks: 5,
            override_ticks: 3 * k as u64,
            max_decisions: 5,
            max_ticks: 3000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpisodeReport {
    pub episode: usize,
    /// Robot mode chosen at the goal click.
    pub initial_m_r: ModeId,
    pub final_m_r: ModeId,
    /// The operator's last sampled mode.
    pub operator_mode: ModeId,
    /// Robot and operator ended in the same mode.
    pub agreement: bool,
    pub overrides: usize,
    pub alpha_probs: [f64; 5],
    pub m_h: Option<ModeId>,
    pub steps_to_goal: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSummary {
    pub episodes: usize,
    /// Fraction of episodes ending with the robot in the operator's preferred mode.
    pub compliance_rate: f64,
    /// Fraction of episodes ending with the robot in the optimal mode.
    pub optimal_rate: f64,
    pub agreement_rate: f64,
    pub goal_rate: f64,
    pub mean_alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub alpha_true: f64,
    pub preferred: ModeId,
    pub optimal: ModeId,
    pub episodes: Vec<EpisodeReport>,
    pub summary: Option<ExperimentSummary>,
}

impl ExperimentReport {
    /// One JSON object per episode followed by the summary. Empty when no
    /// episodes ran.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for e in &self.episodes {
            out.push_str(&serde_json::to_string(e).expect("report serializes"));
            out.push('\n');
        }
        if let Some(s) = &self.summary {
            let line = serde_json::json!({ "summary": s });
            out.push_str(&line.to_string());
            out.push('\n');
        }
        out
    }
}

fn steer(engine: &Engine, path: &Path) -> InboundCommand {
    let limits = engine.limits();
    let twist = follow_path(engine.world(), path, &limits, &engine.settings().follow);
    let stick = JoystickInput::from_twist(twist, &limits);
    InboundCommand::CmdVel(CmdVelMsg {
        v: twist.v,
        omega: twist.omega,
        pull: Some(stick.pull),
        bearing: Some(stick.bearing),
    })
}

fn release() -> InboundCommand {
    InboundCommand::CmdVel(CmdVelMsg {
        v: 0.0,
        omega: 0.0,
        pull: Some(0.0),
        bearing: Some(0.0),
    })
}

/// Loads the configured scenario and runs [`run_headless_with`].
pub fn run_headless(
    config: &ServerConfig,
    alpha_true: f64,
    preferred: ModeId,
    episodes: usize,
) -> Result<ExperimentReport, EngineError> {
    config.validate()?;
    let scenario = load_scenario_file(&config.scenario_path)?;
    let script = OperatorScript::for_history(config.k);
    run_headless_with(config, scenario, alpha_true, preferred, episodes, &script)
}

/// Closed-loop episodes from the scenario start to its first goal with a
/// synthetic operator whose true adaptability is `alpha_true`.
///
/// Each episode the operator first drives along its preferred mode, releases
/// the stick and clicks the goal. Whenever the robot commits to a mode the
/// operator samples a response and, when it disagrees, overrides toward its
/// preferred mode until the robot republishes. The belief persists across
/// episodes.
pub fn run_headless_with(
    config: &ServerConfig,
    scenario: Scenario,
    alpha_true: f64,
    preferred: ModeId,
    episodes: usize,
    script: &OperatorScript,
) -> Result<ExperimentReport, EngineError> {
    config.validate()?;
    if !(0.0..=1.0).contains(&alpha_true) {
        return Err(EngineError::Config(format!("alpha_true must lie in [0, 1], got {alpha_true}")));
    }
    let goal = scenario
        .goals
        .first()
        .map(|g| g.pose)
        .ok_or_else(|| EngineError::InvalidScenario("scenario has no goal".into()))?;
    let mut engine = Engine::new(scenario, config.settings())?;
    let modes = engine.modes().cloned().expect("engine starts with a mode set");
    if modes.len() < 2 {
        return Err(EngineError::InvalidScenario(
            "headless runs need at least two candidate modes".into(),
        ));
    }
    let preferred_path = modes
        .get(preferred)
        .ok_or_else(|| EngineError::Config(format!("preferred mode {preferred} is not a candidate")))?
        .path
        .clone();
    let mut operator = SyntheticOperator::new(alpha_true, config.seed);
    let goal_msg = InboundCommand::Goal(GoalMsg {
        x: goal.x,
        y: goal.y,
        theta: goal.theta,
    });

    let mut reports = Vec::with_capacity(episodes);
    for episode in 0..episodes {
        engine.reset_episode();
        for _ in 0..script.intent_ticks {
            let cmd = steer(&engine, &preferred_path);
            engine.tick([cmd]);
        }
        engine.tick([release()]);
        engine.tick([goal_msg.clone()]);
        let click_tick = engine.world().tick;
        let initial_m_r = engine.m_r().ok_or_else(|| {
            EngineError::InvalidScenario("the first goal could not be planned".into())
        })?;

        let mut seen_plan = engine.plan_count();
        let mut pending = true;
        let mut decisions = 0;
        let mut overrides = 0;
        let mut operator_mode = preferred;
        let mut steps_to_goal = None;
        while engine.world().tick - click_tick < script.max_ticks {
            if engine.goal_reached() {
                steps_to_goal = Some(engine.world().tick - click_tick);
                break;
            }
            if pending && decisions < script.max_decisions {
                pending = false;
                decisions += 1;
                let m_r = engine.m_r().unwrap_or(initial_m_r);
                operator_mode = operator.next_mode(preferred, m_r);
                if operator_mode != m_r {
                    overrides += 1;
                    for _ in 0..script.reaction_ticks {
                        engine.tick([]);
                    }
                    for _ in 0..script.override_ticks {
                        let cmd = steer(&engine, &preferred_path);
                        engine.tick([cmd]);
                    }
                    engine.tick([release()]);
                }
            }
            engine.tick([]);
            if engine.plan_count() != seen_plan {
                seen_plan = engine.plan_count();
                pending = true;
            }
        }

        let final_m_r = engine.m_r().unwrap_or(initial_m_r);
        reports.push(EpisodeReport {
            episode,
            initial_m_r,
            final_m_r,
            operator_mode,
            agreement: final_m_r == operator_mode,
            overrides,
            alpha_probs: engine.belief().alpha_probs,
            m_h: engine.belief().current_m_h,
            steps_to_goal,
        });
    }

    let summary = (!reports.is_empty()).then(|| {
        let n = reports.len() as f64;
        let rate = |f: &dyn Fn(&EpisodeReport) -> bool| reports.iter().filter(|e| f(e)).count() as f64 / n;
        ExperimentSummary {
            episodes: reports.len(),
            compliance_rate: rate(&|e| e.final_m_r == preferred),
            optimal_rate: rate(&|e| e.final_m_r == modes.optimal_id),
            agreement_rate: rate(&|e| e.agreement),
            goal_rate: rate(&|e| e.steps_to_goal.is_some()),
            mean_alpha: engine.belief().mean_alpha(),
        }
    });

    Ok(ExperimentReport {
        alpha_true,
        preferred,
        optimal: modes.optimal_id,
        episodes: reports,
        summary,
    })
}
