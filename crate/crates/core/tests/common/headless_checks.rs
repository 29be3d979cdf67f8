use sharenav_core::engine::*;

use super::*;

pub fn headless_config() -> ServerConfig {
    ServerConfig { scenario_path: fixture_path(), seed: 7, ..ServerConfig::default() }
}

pub fn adaptable_operator_follows_the_robot() {
    let r = run_headless(&headless_config(), 1.0, 1, 10).unwrap();
    let optimal = r.episodes.iter().filter(|e| e.final_m_r == r.optimal).count();
    assert!(optimal >= 9, "{optimal}");
    assert!(r.episodes.iter().all(|e| e.steps_to_goal.is_some()));
}

pub fn insistent_operator_is_obeyed() {
    let r = run_headless(&headless_config(), 0.0, 1, 10).unwrap();
    let complied = r.episodes.iter().filter(|e| e.final_m_r == 1).count();
    assert!(complied >= 8, "{complied}");
    assert!(r.summary.unwrap().compliance_rate >= 0.8);
}

pub fn two_compliances_concentrate_belief() {
    let cfg = ServerConfig { prior: Prior::Uniform, ..headless_config() };
    let r = run_headless(&cfg, 1.0, 1, 2).unwrap();
    let last = r.episodes.last().unwrap();
    let mass: f64 = last.alpha_probs[3] + last.alpha_probs[4];
    assert!(mass >= 0.8, "{:?}", last.alpha_probs);
}
