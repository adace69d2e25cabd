//! Practical search planners: the exponential tree heuristic and the
//! minimum latency baseline.

use serde::{Deserialize, Serialize};

use crate::discretize::{DualGraph, PixelGrid};
use crate::tours::{greedy_reward_tree, tsp_path, tsp_tour, GraphMetric, TreeCap};

pub use crate::tours::Route;

/// Default block ratio of the minimum latency heuristic.
pub const DEFAULT_EPSILON: f64 = 0.01;

/// How the exponential tree heuristic caps the tree at iteration `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CapMode {
    /// At most `min(2^j, N)` nodes.
    #[default]
    Nodes,
    /// Tree edge cost at most `2^j`.
    Cost,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpTreeRun {
    pub route: Route,
    /// Tree size at each iteration `j = 0, 1, …`.
    pub tree_sizes: Vec<usize>,
}

/// Greedy reward trees with doubling caps; each iteration tours the tree's
/// not-yet-visited nodes from the start and returns.
pub fn exponential_tree_heuristic_with(
    graph: &DualGraph,
    grid: &PixelGrid,
    metric: &GraphMetric,
    start: usize,
    cap_mode: CapMode,
) -> ExpTreeRun {
    let n = grid.len();
    let mut visited = vec![false; n];
    let mut route = Route::at(start);
    let mut tree_sizes = Vec::new();
    visited[start] = true;
    let mut j: u32 = 0;
    while visited.iter().any(|v| !v) {
        let cap = match cap_mode {
            CapMode::Nodes => TreeCap::Nodes(2usize.saturating_pow(j).min(n)),
            CapMode::Cost => TreeCap::Cost(2f64.powi(j as i32)),
        };
        let tree = greedy_reward_tree(graph, &grid.rewards, start, cap, &visited);
        tree_sizes.push(tree.len());
        let fresh = tree.fresh_nodes();
        if fresh.len() > 1 {
            let tour = tsp_tour(&fresh, metric, start);
            route.begin_leg();
            let leg_start = route.waypoints.len();
            route.follow(&tour.nodes[1..], metric, graph);
            route.travel_to(start, metric, graph);
            for &v in &route.waypoints[leg_start..] {
                visited[v] = true;
            }
        }
        for &v in &tree.nodes {
            visited[v] = true;
        }
        j += 1;
    }
    ExpTreeRun { route, tree_sizes }
}

pub fn exponential_tree_heuristic(
    graph: &DualGraph,
    grid: &PixelGrid,
    metric: &GraphMetric,
    start: usize,
    cap_mode: CapMode,
) -> Route {
    exponential_tree_heuristic_with(graph, grid, metric, start, cap_mode).route
}

/// Block sizes `⌊εN/(1+ε)^i⌋` for `i = 1, 2, …` while positive.
pub fn latency_block_sizes(n: usize, epsilon: f64) -> Vec<usize> {
    let mut sizes = Vec::new();
    let mut used = 0;
    let mut i = 1;
    loop {
        let b = (epsilon * n as f64 / (1.0 + epsilon).powi(i)).floor() as usize;
        if b == 0 || used + b > n {
            break;
        }
        sizes.push(b);
        used += b;
        i += 1;
    }
    sizes
}

/// Global TSP tour whose leading blocks of geometrically decreasing size
/// are re-solved as TSP paths. Nodes past the last block keep the tour order.
pub fn min_latency_heuristic(
    graph: &DualGraph,
    grid: &PixelGrid,
    metric: &GraphMetric,
    start: usize,
    epsilon: f64,
) -> Route {
    let n = grid.len();
    let all: Vec<usize> = (0..n).collect();
    let order = tsp_tour(&all, metric, start).nodes;
    let mut route = Route::at(start);
    // order[0] is the start; blocks cover the remaining positions
    let mut pos = 1;
    let mut current = start;
    for b in latency_block_sizes(n, epsilon) {
        if pos >= n {
            break;
        }
        let end = (pos + b).min(n);
        let mut block: Vec<usize> = order[pos..end].to_vec();
        block.push(current);
        let path = tsp_path(&block, metric, current);
        route.begin_leg();
        route.follow(&path.nodes[1..], metric, graph);
        current = *path.nodes.last().unwrap();
        pos = end;
    }
    if pos < n {
        route.begin_leg();
        route.follow(&order[pos..], metric, graph);
    }
    route
}
