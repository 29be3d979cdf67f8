//! `sharenav`: serves the shared-autonomy simulator over a websocket bridge,
//! or runs closed-loop adaptation experiments with `--headless`.

mod server;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use sharenav_core::adaptation::RewardConfig;
use sharenav_core::engine::{
    run_headless_with, Engine, OperatorScript, Prior, ServerConfig, DEFAULT_PORT,
};
use sharenav_core::nav::ModeId;
use sharenav_core::sim::{load_scenario_file, Scenario, DEFAULT_DT};

#[derive(Debug, Parser)]
#[command(name = "sharenav", version, about)]
struct Cli {
    /// TCP port for the web console and the /ws bridge.
    #[arg(long, default_value_t = DEFAULT_PORT)]
    port: u16,
    /// Scenario file.
    #[arg(long)]
    scenario: PathBuf,
    /// Simulation step in seconds.
    #[arg(long, default_value_t = DEFAULT_DT)]
    dt: f64,
    /// Append every bridge message to this JSON-lines file.
    #[arg(long)]
    log: Option<PathBuf>,
    /// Planning horizon in decision steps.
    #[arg(long, default_value_t = 3)]
    horizon: usize,
    /// Operator history length in ticks.
    #[arg(long, default_value_t = 20)]
    k: usize,
    /// Reward discount factor.
    #[arg(long, default_value_t = RewardConfig::default().beta)]
    beta: f64,
    /// Penalty for robot/operator mode disagreement.
    #[arg(long, default_value_t = RewardConfig::default().w_disagree)]
    w_disagree: f64,
    #[arg(long, default_value_t = RewardConfig::default().goal_bonus)]
    goal_bonus: f64,
    /// Weight on the normalized path cost.
    #[arg(long, default_value_t = RewardConfig::default().cost_scale)]
    cost_scale: f64,
    /// Initial adaptability belief: adaptable or uniform.
    #[arg(long, default_value = "adaptable")]
    prior: Prior,
    /// Directory served at `/`; a minimal page is served when absent.
    #[arg(long)]
    static_dir: Option<PathBuf>,
    /// Run experiments instead of serving.
    #[arg(long)]
    headless: bool,
    /// True adaptability of the synthetic operator.
    #[arg(long, default_value_t = 1.0)]
    alpha_true: f64,
    /// Operator's preferred mode, as an id or a label such as `left`.
    #[arg(long, default_value = "left")]
    preferred: String,
    #[arg(long, default_value_t = 10)]
    episodes: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl Cli {
    fn config(&self) -> ServerConfig {
        ServerConfig {
            port: self.port,
            scenario_path: self.scenario.clone(),
            dt: self.dt,
            log_path: self.log.clone(),
            horizon: self.horizon,
            k: self.k,
            reward: RewardConfig {
                beta: self.beta,
                w_disagree: self.w_disagree,
                goal_bonus: self.goal_bonus,
                cost_scale: self.cost_scale,
            },
            seed: self.seed,
            prior: self.prior,
        }
    }
}

/// Failure classes mapped to exit codes.
enum Failure {
    Config(String),
    Bind(String),
}

fn resolve_mode(scenario: &Scenario, config: &ServerConfig, spec: &str) -> Result<ModeId, String> {
    let engine = Engine::new(scenario.clone(), config.settings()).map_err(|e| e.to_string())?;
    let modes = engine.modes().expect("engine starts with a mode set");
    if let Ok(id) = spec.parse::<ModeId>() {
        return Ok(id);
    }
    modes.by_label(spec).map(|m| m.id).ok_or_else(|| {
        let labels: Vec<_> = modes.modes.iter().map(|m| m.label.as_str()).collect();
        format!("no mode labelled {spec:?}; candidates are {labels:?}")
    })
}

fn headless(cli: &Cli, config: &ServerConfig) -> Result<(), Failure> {
    config.validate().map_err(|e| Failure::Config(e.to_string()))?;
    let scenario = load_scenario_file(&config.scenario_path).map_err(|e| Failure::Config(e.to_string()))?;
    let preferred = resolve_mode(&scenario, config, &cli.preferred).map_err(Failure::Config)?;
    let script = OperatorScript::for_history(config.k);
    let report = run_headless_with(config, scenario, cli.alpha_true, preferred, cli.episodes, &script)
        .map_err(|e| Failure::Config(e.to_string()))?;
    print!("{}", report.to_json_lines());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = cli.config();
    let result = if cli.headless {
        headless(&cli, &config)
    } else {
        server::run(&config, cli.static_dir.clone())
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("sharenav: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Bind(msg)) => {
            eprintln!("sharenav: {msg}");
            ExitCode::from(2)
        }
    }
}
