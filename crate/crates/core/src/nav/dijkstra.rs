use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::{NavError, StepCost};
use crate::sim::{Cell, OccupancyGrid, Pose2D};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Connectivity {
    Four,
    #[default]
    Eight,
}

/// A planned route over grid cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Path {
    pub cells: Vec<Cell>,
    /// Cell centers, in meters.
    pub waypoints: Vec<(f64, f64)>,
    pub steps: StepCost,
    /// Traversal cost in cell steps (diagonal = √2).
    pub cost: f64,
}

impl Path {
    pub fn from_cells(grid: &OccupancyGrid, cells: Vec<Cell>) -> Self {
        let steps = cells
            .windows(2)
            .map(|w| step_cost(w[0], w[1]))
            .fold(StepCost::ZERO, |a, b| a + b);
        let waypoints = cells.iter().map(|&c| grid.cell_center(c)).collect();
        Self {
            cells,
            waypoints,
            steps,
            cost: steps.value(),
        }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn final_waypoint(&self) -> Option<(f64, f64)> {
        self.waypoints.last().copied()
    }

    /// Appends `other`, dropping its first cell when it repeats our last one.
    pub fn join(mut self, grid: &OccupancyGrid, other: &Path) -> Path {
        let skip = usize::from(self.cells.last().is_some() && self.cells.last() == other.cells.first());
        self.cells.extend_from_slice(&other.cells[skip..]);
        Path::from_cells(grid, self.cells)
    }
}

fn step_cost(a: Cell, b: Cell) -> StepCost {
    if a.row != b.row && a.col != b.col {
        StepCost::DIAGONAL
    } else {
        StepCost::STRAIGHT
    }
}

/// Successors of `cell` over free cells. Diagonal moves require both
/// orthogonal cells they pass between to be free.
fn successors<'a>(
    grid: &'a OccupancyGrid,
    blocked: &'a [bool],
    cell: Cell,
    connectivity: Connectivity,
) -> impl Iterator<Item = (Cell, StepCost)> + 'a {
    grid.neighbors8(cell).filter_map(move |n| {
        if blocked[grid.index(n)] {
            return None;
        }
        let diagonal = n.row != cell.row && n.col != cell.col;
        if diagonal {
            if connectivity == Connectivity::Four {
                return None;
            }
            let side_a = Cell::new(cell.row, n.col);
            let side_b = Cell::new(n.row, cell.col);
            if blocked[grid.index(side_a)] || blocked[grid.index(side_b)] {
                return None;
            }
            Some((n, StepCost::DIAGONAL))
        } else {
            Some((n, StepCost::STRAIGHT))
        }
    })
}

/// Dijkstra between two cells of a pre-computed blocked mask.
///
/// Queue pops are ordered by `(cost, row, col)`, so results are deterministic.
pub fn plan_cells(
    grid: &OccupancyGrid,
    blocked: &[bool],
    start: Cell,
    goal: Cell,
    connectivity: Connectivity,
) -> Result<Path, NavError> {
    if !grid.contains(start) || !grid.contains(goal) {
        return Err(NavError::InvalidEndpoint("endpoint outside the grid".into()));
    }
    if blocked[grid.index(start)] {
        return Err(NavError::InvalidEndpoint(format!(
            "start cell ({}, {}) is blocked",
            start.row, start.col
        )));
    }
    if blocked[grid.index(goal)] {
        return Err(NavError::InvalidEndpoint(format!(
            "goal cell ({}, {}) is blocked",
            goal.row, goal.col
        )));
    }

    let n = grid.len();
    let mut dist: Vec<Option<StepCost>> = vec![None; n];
    let mut prev: Vec<Option<usize>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    let s = grid.index(start);
    let g = grid.index(goal);
    dist[s] = Some(StepCost::ZERO);
    heap.push(Reverse((StepCost::ZERO, s)));

    while let Some(Reverse((d, u))) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        if u == g {
            break;
        }
        let cell = grid.cell_of_index(u);
        for (next, w) in successors(grid, blocked, cell, connectivity) {
            let v = grid.index(next);
            if done[v] {
                continue;
            }
            let nd = d + w;
            if dist[v].map_or(true, |old| nd < old) {
                dist[v] = Some(nd);
                prev[v] = Some(u);
                heap.push(Reverse((nd, v)));
            }
        }
    }

    if !done[g] {
        return Err(NavError::NoPath);
    }
    let mut cells = vec![goal];
    let mut cur = g;
    while let Some(p) = prev[cur] {
        cells.push(grid.cell_of_index(p));
        cur = p;
    }
    cells.reverse();
    Ok(Path::from_cells(grid, cells))
}

fn endpoint_cell(grid: &OccupancyGrid, pose: &Pose2D, what: &str) -> Result<Cell, NavError> {
    grid.cell_at(pose.x, pose.y).ok_or_else(|| {
        NavError::InvalidEndpoint(format!("{what} ({}, {}) is outside the map", pose.x, pose.y))
    })
}

/// Minimal-cost 8-connected path over the grid inflated by `radius`.
pub fn plan_shortest(
    grid: &OccupancyGrid,
    start: &Pose2D,
    goal: &Pose2D,
    radius: f64,
) -> Result<Path, NavError> {
    plan_shortest_with(grid, start, goal, radius, Connectivity::Eight)
}

pub fn plan_shortest_with(
    grid: &OccupancyGrid,
    start: &Pose2D,
    goal: &Pose2D,
    radius: f64,
    connectivity: Connectivity,
) -> Result<Path, NavError> {
    let s = endpoint_cell(grid, start, "start")?;
    let g = endpoint_cell(grid, goal, "goal")?;
    let blocked = grid.inflate(radius);
    plan_cells(grid, &blocked, s, g, connectivity)
}

/// Closest unblocked cell to a world point, by center distance then `(row, col)`.
pub fn nearest_free_cell(grid: &OccupancyGrid, blocked: &[bool], x: f64, y: f64) -> Option<Cell> {
    (0..grid.len())
        .filter(|&i| !blocked[i])
        .map(|i| {
            let c = grid.cell_of_index(i);
            let (cx, cy) = grid.cell_center(c);
            ((cx - x).hypot(cy - y), c)
        })
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .map(|(_, c)| c)
}
