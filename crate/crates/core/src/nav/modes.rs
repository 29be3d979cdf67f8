use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{plan_cells, Connectivity, NavError, Path};
use crate::sim::{Cell, OccupancyGrid, Pose2D};

pub type ModeId = usize;

/// Second-mode cost must stay within this multiple of the shortest path.
pub const MAX_COST_RATIO: f64 = 3.0;
/// Cells of the shortest path this close (Chebyshev) to an endpoint stay open
/// when searching for the alternative.
pub const ENDPOINT_MARGIN: usize = 2;

const AREA_EPS: f64 = 1e-9;

/// One modal policy: a candidate path toward the goal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub id: ModeId,
    pub path: Path,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSet {
    pub modes: Vec<Mode>,
    pub optimal_id: ModeId,
}

impl ModeSet {
    /// Builds a set from modes, picking the cheapest (lowest id on ties) as optimal.
    pub fn new(modes: Vec<Mode>) -> Self {
        assert!(!modes.is_empty(), "a mode set needs at least one mode");
        let optimal_id = modes
            .iter()
            .min_by(|a, b| a.path.steps.cmp(&b.path.steps).then(a.id.cmp(&b.id)))
            .map(|m| m.id)
            .unwrap();
        Self { modes, optimal_id }
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn get(&self, id: ModeId) -> Option<&Mode> {
        self.modes.iter().find(|m| m.id == id)
    }

    pub fn contains(&self, id: ModeId) -> bool {
        self.get(id).is_some()
    }

    pub fn cost(&self, id: ModeId) -> Option<f64> {
        self.get(id).map(|m| m.path.cost)
    }

    pub fn by_label(&self, label: &str) -> Option<&Mode> {
        self.modes.iter().find(|m| m.label == label)
    }

    pub fn ids(&self) -> impl Iterator<Item = ModeId> + '_ {
        self.modes.iter().map(|m| m.id)
    }

    pub fn optimal(&self) -> &Mode {
        self.get(self.optimal_id).expect("optimal id is a member")
    }
}

/// Signed area between a path and the chord from its first to last waypoint.
///
/// Positive when the path bulges to the left of the chord direction.
pub fn signed_area(waypoints: &[(f64, f64)]) -> f64 {
    let Some(&(x0, y0)) = waypoints.first() else {
        return 0.0;
    };
    let shoelace: f64 = waypoints
        .windows(2)
        .map(|w| {
            let (ax, ay) = (w[0].0 - x0, w[0].1 - y0);
            let (bx, by) = (w[1].0 - x0, w[1].1 - y0);
            ax * by - ay * bx
        })
        .sum();
    // the polygon path + chord is clockwise when the path sits left of the chord
    -0.5 * shoelace
}

/// Even-odd point-in-polygon test.
fn inside(polygon: &[(f64, f64)], x: f64, y: f64) -> bool {
    let mut crossing = false;
    let n = polygon.len();
    for i in 0..n {
        let (ax, ay) = polygon[i];
        let (bx, by) = polygon[(i + 1) % n];
        if (ay > y) != (by > y) {
            let xc = ax + (y - ay) * (bx - ax) / (by - ay);
            if x < xc {
                crossing = !crossing;
            }
        }
    }
    crossing
}

/// True when some blocked cell center lies in the loop formed by `a` and reversed `b`.
fn encloses_obstacle(grid: &OccupancyGrid, blocked: &[bool], a: &Path, b: &Path) -> bool {
    let polygon: Vec<(f64, f64)> = a
        .waypoints
        .iter()
        .chain(b.waypoints.iter().rev())
        .copied()
        .collect();
    (0..grid.len()).filter(|&i| blocked[i]).any(|i| {
        let (x, y) = grid.cell_center(grid.cell_of_index(i));
        inside(&polygon, x, y)
    })
}

fn side_label(area: f64) -> &'static str {
    if area > AREA_EPS {
        "left"
    } else if area < -AREA_EPS {
        "right"
    } else {
        "direct"
    }
}

/// Candidate modal policies between two poses.
///
/// Mode 0 is the shortest path. Mode 1 re-plans with mode 0's cells blocked
/// (except those near either endpoint) and is kept when its cost is within
/// [`MAX_COST_RATIO`] of mode 0 and the two paths enclose at least one
/// blocked cell, i.e. they pass the obstacle on different sides.
pub fn candidate_modes(
    grid: &OccupancyGrid,
    start: &Pose2D,
    goal: &Pose2D,
    radius: f64,
) -> Result<ModeSet, NavError> {
    let s = grid
        .cell_at(start.x, start.y)
        .ok_or_else(|| NavError::InvalidEndpoint("start is outside the map".into()))?;
    let g = grid
        .cell_at(goal.x, goal.y)
        .ok_or_else(|| NavError::InvalidEndpoint("goal is outside the map".into()))?;
    let blocked = grid.inflate(radius);
    candidate_modes_from_cells(grid, &blocked, s, g)
}

pub fn candidate_modes_from_cells(
    grid: &OccupancyGrid,
    blocked: &[bool],
    start: Cell,
    goal: Cell,
) -> Result<ModeSet, NavError> {
    let primary = plan_cells(grid, blocked, start, goal, Connectivity::Eight)?;
    let mut paths = vec![primary];

    if paths[0].cells.len() > 1 {
        let mut detour_mask = blocked.to_vec();
        for &c in &paths[0].cells {
            if c.chebyshev(start) > ENDPOINT_MARGIN && c.chebyshev(goal) > ENDPOINT_MARGIN {
                detour_mask[grid.index(c)] = true;
            }
        }
        if let Ok(alt) = plan_cells(grid, &detour_mask, start, goal, Connectivity::Eight) {
            let interior = |p: &Path| -> BTreeSet<Cell> {
                p.cells[1..p.cells.len().saturating_sub(1)].iter().copied().collect()
            };
            let distinct = interior(&alt)
                .symmetric_difference(&interior(&paths[0]))
                .next()
                .is_some();
            if distinct
                && alt.cost <= MAX_COST_RATIO * paths[0].cost
                && encloses_obstacle(grid, blocked, &paths[0], &alt)
            {
                paths.push(alt);
            }
        }
    }

    let areas: Vec<f64> = paths.iter().map(|p| signed_area(&p.waypoints)).collect();
    let labels: Vec<&str> = match areas.as_slice() {
        [a] => vec![side_label(*a)],
        [a, b] if side_label(*a) != side_label(*b) && side_label(*a) != "direct" && side_label(*b) != "direct" => {
            vec![side_label(*a), side_label(*b)]
        }
        [a, b] => {
            if a >= b {
                vec!["left", "right"]
            } else {
                vec!["right", "left"]
            }
        }
        _ => unreachable!("at most two modes"),
    };

    let modes = paths
        .into_iter()
        .zip(labels)
        .enumerate()
        .map(|(id, (path, label))| Mode {
            id,
            path,
            label: label.to_string(),
        })
        .collect();
    Ok(ModeSet::new(modes))
}
