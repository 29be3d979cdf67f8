//! Mutual adaptation: a bounded-memory model of how the operator switches
//! between candidate modes, a Bayesian belief over their adaptability, and a
//! finite-horizon planner choosing which mode the robot should pursue.

mod bam;
mod belief;
mod history;
mod infer;
mod operator;
mod planner;
mod reward;

use thiserror::Error;

pub use bam::{bam_probability, bam_transition};
pub use belief::{update_belief, AdaptationBelief, ALPHA_SUPPORT};
pub use history::{HistorySample, HistoryWindow};
pub use infer::{cumulative_approach, distance_to_path, infer_mode, InferConfig};
pub use operator::{synthetic_operator, SyntheticOperator};
pub use planner::{expected_return, plan_mode, DEFAULT_HORIZON};
pub use reward::{reward, RewardConfig};

/// Default history length in ticks.
pub const DEFAULT_HISTORY_LEN: usize = 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AdaptationError {
    #[error("mode {0} is not in the mode set")]
    UnknownMode(crate::nav::ModeId),
}
