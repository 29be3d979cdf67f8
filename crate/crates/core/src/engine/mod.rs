//! The single-writer simulation loop tying the world, arbitration, planning
//! and adaptation together, plus closed-loop headless experiments.

mod config;
mod experiment;
mod runtime;

use thiserror::Error;

pub use config::{EngineSettings, Prior, ServerConfig, DEFAULT_PORT};
pub use experiment::{
    run_headless, run_headless_with, EpisodeReport, ExperimentReport, ExperimentSummary, OperatorScript,
};
pub use runtime::{Engine, EngineEvent, PlanReason, TickReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error(transparent)]
    Sim(#[from] crate::sim::SimError),
    #[error(transparent)]
    Nav(#[from] crate::nav::NavError),
}
