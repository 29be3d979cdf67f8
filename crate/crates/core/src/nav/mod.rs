//! Global planning on the occupancy grid, candidate mode generation and a
//! carrot-point path follower.

mod cost;
mod dijkstra;
mod follow;
mod modes;

use thiserror::Error;

pub use cost::StepCost;
pub use dijkstra::{
    nearest_free_cell, plan_cells, plan_shortest, plan_shortest_with, Connectivity, Path,
};
pub use follow::{at_goal, carrot_point, follow_path, nearest_waypoint, FollowConfig};
pub use modes::{
    candidate_modes, candidate_modes_from_cells, signed_area, Mode, ModeId, ModeSet,
    ENDPOINT_MARGIN, MAX_COST_RATIO,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NavError {
    #[error("goal is unreachable")]
    NoPath,
    #[error("invalid endpoint: {0}")]
    InvalidEndpoint(String),
}
