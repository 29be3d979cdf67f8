//! Shared-autonomy navigation for a web-operated mobile robot.
//!
//! The crate is organised bottom-up:
//!
//! - [`sim`]: grid world, unicycle stepping and collision checks
//! - [`nav`]: Dijkstra planning, candidate modes and path following
//! - [`control`]: joystick mapping, speed limits and the arbitration machine
//! - [`adaptation`]: operator model, belief tracking and mode selection
//! - [`bridge`]: the JSON topic protocol, routing and message logging
//! - [`engine`]: the fixed-tick loop tying everything together, plus the
//!   headless adaptation experiment

pub mod adaptation;
pub mod bridge;
pub mod control;
pub mod engine;
pub mod nav;
pub mod sim;
