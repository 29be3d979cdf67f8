use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{check_collision, OccupancyGrid, Pose2D, SimError, DEFAULT_ROBOT_RADIUS};
use crate::control::SpeedLimits;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedGoal {
    pub name: String,
    pub pose: Pose2D,
}

/// A validated world definition: map, start pose and goal set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub grid: OccupancyGrid,
    pub start: Pose2D,
    pub goals: Vec<NamedGoal>,
    pub robot_radius: f64,
    pub speed_limits: SpeedLimits,
}

impl Scenario {
    /// Checks start and goal clearance and the goal set.
    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.robot_radius.is_finite() && self.robot_radius >= 0.0) {
            return Err(SimError::InvalidScenario(format!(
                "robot radius must be non-negative, got {}",
                self.robot_radius
            )));
        }
        if self.goals.is_empty() {
            return Err(SimError::InvalidScenario("goal set is empty".into()));
        }
        if check_collision(&self.grid, &self.start, self.robot_radius) {
            return Err(SimError::InvalidScenario(format!(
                "start ({}, {}) is in collision",
                self.start.x, self.start.y
            )));
        }
        for goal in &self.goals {
            if check_collision(&self.grid, &goal.pose, self.robot_radius) {
                return Err(SimError::InvalidScenario(format!(
                    "goal {} at ({}, {}) is in collision",
                    goal.name, goal.pose.x, goal.pose.y
                )));
            }
        }
        Ok(())
    }

    pub fn goal(&self, name: &str) -> Option<&NamedGoal> {
        self.goals.iter().find(|g| g.name == name)
    }
}

fn parse_err(line: usize, reason: impl Into<String>) -> SimError {
    SimError::Parse {
        line,
        reason: reason.into(),
    }
}

fn parse_f64(tok: &str, line: usize, what: &str) -> Result<f64, SimError> {
    let v: f64 = tok
        .parse()
        .map_err(|_| parse_err(line, format!("{what}: expected a number, got {tok:?}")))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("{what}: value must be finite")));
    }
    Ok(v)
}

fn expect_args<'a>(
    toks: &'a [&'a str],
    n: usize,
    line: usize,
    keyword: &str,
) -> Result<&'a [&'a str], SimError> {
    if toks.len() != n + 1 {
        return Err(parse_err(
            line,
            format!("`{keyword}` takes {n} arguments, got {}", toks.len() - 1),
        ));
    }
    Ok(&toks[1..])
}

/// Parses and validates a scenario document.
///
/// Format: `grid W H RES`, then `H` rows of `W` characters (`#` occupied,
/// `.` free, row 0 at the top), then `start X Y THETA`, one or more
/// `goal NAME X Y THETA`, and optional `radius R`, `vmax V`, `wmax W`.
pub fn load_scenario(document: &str) -> Result<Scenario, SimError> {
    let mut lines = document.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end()));

    let (hline, header) = lines
        .by_ref()
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or_else(|| parse_err(1, "empty document"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.first() != Some(&"grid") {
        return Err(parse_err(hline, "expected `grid W H RES` header"));
    }
    let args = expect_args(&toks, 3, hline, "grid")?;
    let width: usize = args[0]
        .parse()
        .map_err(|_| parse_err(hline, format!("bad width {:?}", args[0])))?;
    let height: usize = args[1]
        .parse()
        .map_err(|_| parse_err(hline, format!("bad height {:?}", args[1])))?;
    let resolution = parse_f64(args[2], hline, "resolution")?;
    if width == 0 || height == 0 {
        return Err(parse_err(hline, "grid dimensions must be positive"));
    }
    if resolution <= 0.0 {
        return Err(parse_err(hline, "resolution must be positive"));
    }

    let mut cells = Vec::with_capacity(width * height);
    for row in 0..height {
        let (n, text) = lines
            .next()
            .ok_or_else(|| parse_err(hline + row + 1, format!("missing grid row {row}")))?;
        let text = text.trim();
        if text.chars().count() != width {
            return Err(parse_err(
                n,
                format!("grid row {row} has {} cells, expected {width}", text.chars().count()),
            ));
        }
        for ch in text.chars() {
            match ch {
                '#' => cells.push(true),
                '.' => cells.push(false),
                other => return Err(parse_err(n, format!("unexpected grid character {other:?}"))),
            }
        }
    }
    let grid = OccupancyGrid::new(width, height, resolution, cells)?;

    let mut start = None;
    let mut goals = Vec::new();
    let mut robot_radius = DEFAULT_ROBOT_RADIUS;
    let mut limits = SpeedLimits::default();
    for (n, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let Some(&keyword) = toks.first() else {
            continue;
        };
        match keyword {
            "start" => {
                if start.is_some() {
                    return Err(parse_err(n, "duplicate `start`"));
                }
                let a = expect_args(&toks, 3, n, "start")?;
                start = Some(Pose2D::new(
                    parse_f64(a[0], n, "start x")?,
                    parse_f64(a[1], n, "start y")?,
                    parse_f64(a[2], n, "start theta")?,
                ));
            }
            "goal" => {
                let a = expect_args(&toks, 4, n, "goal")?;
                let name = a[0].to_string();
                if goals.iter().any(|g: &NamedGoal| g.name == name) {
                    return Err(parse_err(n, format!("duplicate goal name {name:?}")));
                }
                goals.push(NamedGoal {
                    name,
                    pose: Pose2D::new(
                        parse_f64(a[1], n, "goal x")?,
                        parse_f64(a[2], n, "goal y")?,
                        parse_f64(a[3], n, "goal theta")?,
                    ),
                });
            }
            "radius" => robot_radius = parse_f64(expect_args(&toks, 1, n, "radius")?[0], n, "radius")?,
            "vmax" => {
                let v = parse_f64(expect_args(&toks, 1, n, "vmax")?[0], n, "vmax")?;
                limits = SpeedLimits::new(v, limits.omega_max);
            }
            "wmax" => {
                let w = parse_f64(expect_args(&toks, 1, n, "wmax")?[0], n, "wmax")?;
                limits = SpeedLimits::new(limits.v_max, w);
            }
            other => return Err(parse_err(n, format!("unknown directive {other:?}"))),
        }
    }

    let scenario = Scenario {
        grid,
        start: start.ok_or_else(|| parse_err(hline, "missing `start` line"))?,
        goals,
        robot_radius,
        speed_limits: limits,
    };
    scenario.validate()?;
    Ok(scenario)
}

pub fn load_scenario_file(path: impl AsRef<Path>) -> Result<Scenario, SimError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| SimError::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    load_scenario(&text)
}
