//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use rand::Rng;
use sharenav_core::sim::{load_scenario_file, Cell, OccupancyGrid, Scenario};

pub const SQRT_2: f64 = std::f64::consts::SQRT_2;

pub fn fixture_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/two_corridor.scn")
}

pub fn fixture() -> Scenario {
    load_scenario_file(fixture_path()).expect("fixture loads")
}

pub fn random_grid(rng: &mut impl Rng, width: usize, height: usize, density: f64) -> OccupancyGrid {
    let cells = (0..width * height).map(|_| rng.gen_bool(density)).collect();
    OccupancyGrid::new(width, height, 1.0, cells).unwrap()
}

/// Explicit edge list of the 8-connected move graph, with the rule that a
/// diagonal needs both cells it squeezes between to be free.
pub fn edge_list(free: &[bool], width: usize, height: usize, diagonals: bool) -> Vec<(usize, usize, f64)> {
    let mut edges = Vec::new();
    let at = |r: i64, c: i64| -> Option<usize> {
        (r >= 0 && c >= 0 && r < height as i64 && c < width as i64).then(|| r as usize * width + c as usize)
    };
    for r in 0..height as i64 {
        for c in 0..width as i64 {
            let u = at(r, c).unwrap();
            if !free[u] {
                continue;
            }
            for (dr, dc) in [(-1, 0), (1, 0), (0, -1), (0, 1)] {
                if let Some(v) = at(r + dr, c + dc).filter(|&v| free[v]) {
                    edges.push((u, v, 1.0));
                }
            }
            if !diagonals {
                continue;
            }
            for (dr, dc) in [(-1, -1), (-1, 1), (1, -1), (1, 1)] {
                let (Some(v), Some(a), Some(b)) = (at(r + dr, c + dc), at(r, c + dc), at(r + dr, c)) else {
                    continue;
                };
                if free[v] && free[a] && free[b] {
                    edges.push((u, v, SQRT_2));
                }
            }
        }
    }
    edges
}

/// Quadratic-time Dijkstra over an edge list; no heap, no shared code.
pub fn brute_dijkstra(n: usize, edges: &[(usize, usize, f64)], s: usize, g: usize) -> Option<f64> {
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    dist[s] = 0.0;
    loop {
        let u = (0..n).filter(|&i| !done[i] && dist[i].is_finite()).min_by(|&a, &b| dist[a].total_cmp(&dist[b]))?;
        if u == g {
            return Some(dist[g]);
        }
        done[u] = true;
        for &(a, b, w) in edges {
            if a == u && dist[u] + w < dist[b] {
                dist[b] = dist[u] + w;
            }
        }
    }
}

pub fn bfs_hops(free: &[bool], width: usize, height: usize, s: usize, g: usize) -> Option<usize> {
    let edges = edge_list(free, width, height, false);
    let mut hops = vec![usize::MAX; free.len()];
    let mut queue = std::collections::VecDeque::from([s]);
    hops[s] = 0;
    while let Some(u) = queue.pop_front() {
        for &(a, b, _) in &edges {
            if a == u && hops[b] == usize::MAX {
                hops[b] = hops[u] + 1;
                queue.push_back(b);
            }
        }
    }
    (hops[g] != usize::MAX).then_some(hops[g])
}

/// Flood-fill component count of the free cells selected by `keep`.
pub fn components(grid: &OccupancyGrid, keep: impl Fn(Cell) -> bool) -> usize {
    let (w, h) = (grid.width(), grid.height());
    let mut seen = vec![false; w * h];
    let mut count = 0;
    for start in 0..w * h {
        let c = Cell::new(start / w, start % w);
        if seen[start] || grid.is_occupied(c) || !keep(c) {
            continue;
        }
        count += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(u) = stack.pop() {
            let (r, c) = ((u / w) as i64, (u % w) as i64);
            for (dr, dc) in [(-1, 0), (1, 0), (0, -1), (0, 1)] {
                let (nr, nc) = (r + dr, c + dc);
                if nr < 0 || nc < 0 || nr >= h as i64 || nc >= w as i64 {
                    continue;
                }
                let v = nr as usize * w + nc as usize;
                let cell = Cell::new(nr as usize, nc as usize);
                if !seen[v] && !grid.is_occupied(cell) && keep(cell) {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
    }
    count
}

/// Reward model restated from its definition: normalized cost plus a
/// disagreement penalty.
pub fn oracle_reward(costs: &[f64], m_r: usize, m_h: usize, w_disagree: f64, cost_scale: f64) -> f64 {
    let best = costs.iter().cloned().fold(f64::INFINITY, f64::min);
    -cost_scale * costs[m_r] / best - if m_r != m_h { w_disagree } else { 0.0 }
}

/// Value of holding robot mode `m_r` for `horizon` steps, by enumerating every
/// operator mode sequence explicitly.
pub fn enumerate_value(
    alpha_probs: &[f64; 5],
    costs: &[f64],
    m_h0: usize,
    m_r: usize,
    horizon: usize,
    beta: f64,
    w_disagree: f64,
    cost_scale: f64,
) -> f64 {
    let alphas = [0.0, 0.25, 0.5, 0.75, 1.0];
    let n = costs.len();
    let mut total = 0.0;
    for (alpha, weight) in alphas.iter().zip(alpha_probs) {
        // every sequence h_1..h_{H-1}
        let sequences = n.pow(horizon.saturating_sub(1) as u32);
        for code in 0..sequences {
            let mut seq = vec![m_h0];
            let mut rest = code;
            for _ in 1..horizon {
                seq.push(rest % n);
                rest /= n;
            }
            let mut prob = 1.0;
            for t in 1..horizon {
                let (from, to) = (seq[t - 1], seq[t]);
                // switch to the robot's mode with probability alpha, else stay
                let p = if from == m_r {
                    if to == m_r { 1.0 } else { 0.0 }
                } else if to == m_r {
                    *alpha
                } else if to == from {
                    1.0 - alpha
                } else {
                    0.0
                };
                prob *= p;
            }
            let ret: f64 = seq
                .iter()
                .enumerate()
                .map(|(t, &h)| beta.powi(t as i32) * oracle_reward(costs, m_r, h, w_disagree, cost_scale))
                .sum();
            total += weight * prob * ret;
        }
    }
    total
}

pub mod adaptation_checks;
pub mod arbitration_checks;
pub mod headless_checks;
pub mod protocol_checks;
