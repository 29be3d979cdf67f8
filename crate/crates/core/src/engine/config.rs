use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::EngineError;
use crate::adaptation::{AdaptationBelief, InferConfig, RewardConfig, DEFAULT_HISTORY_LEN, DEFAULT_HORIZON};
use crate::control::ArbitrationConfig;
use crate::nav::FollowConfig;
use crate::sim::DEFAULT_DT;

pub const DEFAULT_PORT: u16 = 8080;

/// Initial belief over operator adaptability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Prior {
    /// Most mass on fully adaptable operators.
    #[default]
    Adaptable,
    Uniform,
}

impl Prior {
    pub fn belief(self) -> AdaptationBelief {
        match self {
            Prior::Adaptable => AdaptationBelief::adaptable(),
            Prior::Uniform => AdaptationBelief::uniform(),
        }
    }
}

impl FromStr for Prior {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "adaptable" => Ok(Prior::Adaptable),
            "uniform" => Ok(Prior::Uniform),
            other => Err(format!("unknown prior {other:?} (expected adaptable or uniform)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ServerConfig {
    pub port: u16,
    pub scenario_path: PathBuf,
    pub dt: f64,
    pub log_path: Option<PathBuf>,
    pub horizon: usize,
    /// History length in ticks.
    pub k: usize,
    pub reward: RewardConfig,
    pub seed: u64,
    pub prior: Prior,
}

impl Default for ServerConfig {
    fn default() -> Self {
        Self {
            port: DEFAULT_PORT,
            scenario_path: PathBuf::new(),
            dt: DEFAULT_DT,
            log_path: None,
            horizon: DEFAULT_HORIZON,
            k: DEFAULT_HISTORY_LEN,
            reward: RewardConfig::default(),
            seed: 0,
            prior: Prior::default(),
        }
    }
}

impl ServerConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(EngineError::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if self.port == 0 {
            return Err(EngineError::Config("port must be in [1, 65535]".into()));
        }
        if self.k == 0 {
            return Err(EngineError::Config("k must be at least 1".into()));
        }
        if self.horizon == 0 {
            return Err(EngineError::Config("horizon must be at least 1".into()));
        }
        self.reward.validate().map_err(EngineError::Config)
    }

    pub fn settings(&self) -> EngineSettings {
        EngineSettings {
            dt: self.dt,
            horizon: self.horizon,
            history_len: self.k,
            reward: self.reward,
            prior: self.prior,
            ..EngineSettings::default()
        }
    }
}

/// Everything the simulation loop needs besides the scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineSettings {
    pub dt: f64,
    pub horizon: usize,
    pub history_len: usize,
    pub reward: RewardConfig,
    pub prior: Prior,
    pub arbitration: ArbitrationConfig,
    pub follow: FollowConfig,
    pub infer: InferConfig,
}

impl Default for EngineSettings {
    fn default() -> Self {
        Self {
            dt: DEFAULT_DT,
            horizon: DEFAULT_HORIZON,
            history_len: DEFAULT_HISTORY_LEN,
            reward: RewardConfig::default(),
            prior: Prior::default(),
            arbitration: ArbitrationConfig::default(),
            follow: FollowConfig::default(),
            infer: InferConfig::default(),
        }
    }
}

impl EngineSettings {
    /// Ticks between `/robot_pose` messages (10 Hz).
    pub fn pose_period(&self) -> u64 {
        ((0.1 / self.dt).round() as u64).max(1)
    }

    /// Ticks between `/mode_state` messages (2 Hz).
    pub fn mode_state_period(&self) -> u64 {
        ((0.5 / self.dt).round() as u64).max(1)
    }
}
