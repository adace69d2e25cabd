//! Reward scaling and quota lawn mowing tours.
//!
//! A quota tour is built from a prefix of one greedy maximum-reward growth
//! order: the smallest prefix whose reward meets the quota is doubled into a
//! tour and improved by 2-opt. Because every quota maps to such a prefix,
//! the planner caches tours by prefix length, which keeps the binary search
//! over scaled quotas cheap.
//!
//! Grid-restricted tours lose at most a constant factor against continuous
//! ones; see [`GRID_FACTOR_RECTILINEAR`] and friends.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::discretize::{DualGraph, PixelGrid};
use crate::tours::{
    double_tree_tour, improve_tour, GraphMetric, GreedyGrowth, RewardTree, Route, Tour,
    TourError,
};

/// Grid tour vs optimal tour, square cutter with rectilinear motion.
pub const GRID_FACTOR_RECTILINEAR: f64 = 3.0;
/// Grid tour (with diagonals) vs optimal tour, square cutter with arbitrary motion: 6/√(2+√2).
pub const GRID_FACTOR_ARBITRARY: f64 = 3.246_887_618_923_888;
/// Triangular grid tour vs optimal tour, circular cutter: 2√3.
pub const GRID_FACTOR_HEXAGONAL: f64 = 3.464_101_615_137_754_5;

/// Default cap on the decimal precision used to scale rewards.
pub const DEFAULT_DECIMAL_CAP: u32 = 6;

/// Absolute slack when comparing collected reward with an area quota.
pub const QUOTA_EPS: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum QuotaError {
    #[error("quota {quota} exceeds the available reward {available}")]
    Infeasible { quota: f64, available: f64 },
    #[error(transparent)]
    Tour(#[from] TourError),
}

/// Integer rewards `round(M · r(p))` with `M = 10^D`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaledRewards {
    pub scale: i64,
    pub digits: u32,
    pub scaled: Vec<i64>,
    pub scaled_total: i64,
}

impl ScaledRewards {
    /// Picks the smallest `D ≤ d_cap` at which every reward is a whole
    /// number of `10^-D` units (up to floating-point noise).
    pub fn from_rewards(rewards: &[f64], d_cap: u32) -> Self {
        let exact_at = |d: u32| {
            let m = 10f64.powi(d as i32);
            rewards.iter().all(|&r| {
                let x = r * m;
                (x - x.round()).abs() <= 1e-9 * m * r.abs().max(1.0)
            })
        };
        let digits = (0..=d_cap).find(|&d| exact_at(d)).unwrap_or(d_cap);
        let scale = 10i64.pow(digits);
        let scaled: Vec<i64> = rewards.iter().map(|&r| (r * scale as f64).round() as i64).collect();
        let scaled_total = scaled.iter().sum();
        ScaledRewards {
            scale,
            digits,
            scaled,
            scaled_total,
        }
    }

    /// `Ā = round(M · A)`.
    pub fn scale_quota(&self, area: f64) -> i64 {
        (area * self.scale as f64).round() as i64
    }

    pub fn to_area(&self, quota: i64) -> f64 {
        quota as f64 / self.scale as f64
    }
}

pub fn scale_rewards(grid: &PixelGrid, d_cap: u32) -> ScaledRewards {
    ScaledRewards::from_rewards(&grid.rewards, d_cap)
}

/// Lower bound on any closed walk from the start that visits nodes with
/// total reward at least `quota`: it needs at least `k` distinct nodes, hence
/// at least `k` edges when `k ≥ 2`.
fn walk_lower_bound(sorted_desc: &[f64], quota: f64, min_edge: f64) -> f64 {
    let mut acc = 0.0;
    let mut k = 0;
    for &r in sorted_desc {
        if acc >= quota - QUOTA_EPS {
            break;
        }
        acc += r;
        k += 1;
    }
    if k >= 2 {
        k as f64 * min_edge
    } else {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuotaTour {
    pub tour: Tour,
    /// Nodes in the greedy prefix the tour was built from.
    pub prefix_len: usize,
    /// Reward of every node on the realized walk.
    pub collected_reward: f64,
    pub collected_scaled: i64,
    /// Lower bound on the optimal tour length for the prefix reward.
    pub lower_bound: f64,
}

impl QuotaTour {
    /// Measured approximation slack: tour length over the lower bound (≥ 1).
    pub fn slack(&self) -> f64 {
        if self.lower_bound > 0.0 {
            (self.tour.length / self.lower_bound).max(1.0)
        } else {
            1.0
        }
    }

    pub fn length(&self) -> f64 {
        self.tour.length
    }
}

/// Realizes a closed tour on the graph, returning to its first node.
pub fn tour_route(tour: &Tour, metric: &GraphMetric, graph: &DualGraph) -> Route {
    let mut route = Route::at(tour.start());
    route.follow(&tour.nodes[1..], metric, graph);
    route.travel_to(tour.start(), metric, graph);
    route
}

/// Quota tours for one grid, start node and metric.
pub struct QuotaPlanner<'a> {
    graph: &'a DualGraph,
    grid: &'a PixelGrid,
    metric: &'a GraphMetric,
    scaled: ScaledRewards,
    order: Vec<usize>,
    parents: Vec<Option<usize>>,
    edge_lengths: Vec<f64>,
    /// `prefix_reward[k]` is the reward of the first `k` greedy nodes.
    prefix_reward: Vec<f64>,
    prefix_scaled: Vec<i64>,
    sorted_rewards: Vec<f64>,
    cache: HashMap<usize, QuotaTour>,
}

impl<'a> QuotaPlanner<'a> {
    pub fn new(graph: &'a DualGraph, grid: &'a PixelGrid, metric: &'a GraphMetric, start: usize) -> Self {
        Self::with_decimal_cap(graph, grid, metric, start, DEFAULT_DECIMAL_CAP)
    }

    pub fn with_decimal_cap(
        graph: &'a DualGraph,
        grid: &'a PixelGrid,
        metric: &'a GraphMetric,
        start: usize,
        d_cap: u32,
    ) -> Self {
        let scaled = scale_rewards(grid, d_cap);
        let mut order = Vec::with_capacity(grid.len());
        let mut parents = Vec::with_capacity(grid.len());
        let mut edge_lengths = Vec::with_capacity(grid.len());
        for (v, p, len) in GreedyGrowth::new(graph, &grid.rewards, start) {
            order.push(v);
            parents.push(p);
            edge_lengths.push(len);
        }
        let mut prefix_reward = vec![0.0];
        let mut prefix_scaled = vec![0];
        for &v in &order {
            prefix_reward.push(prefix_reward.last().unwrap() + grid.rewards[v]);
            prefix_scaled.push(prefix_scaled.last().unwrap() + scaled.scaled[v]);
        }
        let mut sorted_rewards = grid.rewards.clone();
        sorted_rewards.sort_by(|a, b| b.total_cmp(a));
        QuotaPlanner {
            graph,
            grid,
            metric,
            scaled,
            order,
            parents,
            edge_lengths,
            prefix_reward,
            prefix_scaled,
            sorted_rewards,
            cache: HashMap::new(),
        }
    }

    pub fn scaled(&self) -> &ScaledRewards {
        &self.scaled
    }

    pub fn start(&self) -> usize {
        self.order[0]
    }

    /// Reward reachable from the start.
    pub fn available_reward(&self) -> f64 {
        *self.prefix_reward.last().unwrap()
    }

    pub fn metric(&self) -> &GraphMetric {
        self.metric
    }

    fn prefix_tree(&self, k: usize) -> RewardTree {
        RewardTree {
            nodes: self.order[..k].to_vec(),
            parents: self.parents[..k].to_vec(),
            edge_lengths: self.edge_lengths[..k].to_vec(),
            already_visited: vec![false; k],
        }
    }

    /// Tour over the first `k` greedy nodes (cached).
    pub fn prefix_tour(&mut self, k: usize) -> &QuotaTour {
        let k = k.clamp(1, self.order.len());
        if !self.cache.contains_key(&k) {
            let tree = self.prefix_tree(k);
            let doubled = double_tree_tour(&tree, self.metric);
            let tour = improve_tour(doubled.nodes, self.metric);
            let route = tour_route(&tour, self.metric, self.graph);
            let mut seen = vec![false; self.grid.len()];
            let (mut reward, mut scaled) = (0.0, 0);
            for &v in &route.waypoints {
                if !seen[v] {
                    seen[v] = true;
                    reward += self.grid.rewards[v];
                    scaled += self.scaled.scaled[v];
                }
            }
            let lower_bound = walk_lower_bound(
                &self.sorted_rewards,
                self.prefix_reward[k],
                self.graph.min_edge_length().unwrap_or(0.0),
            );
            self.cache.insert(
                k,
                QuotaTour {
                    tour,
                    prefix_len: k,
                    collected_reward: reward,
                    collected_scaled: scaled,
                    lower_bound,
                },
            );
        }
        &self.cache[&k]
    }

    /// Shortest prefix whose reward reaches `area` (in area units).
    fn prefix_for_area(&self, area: f64) -> Result<usize, QuotaError> {
        let available = self.available_reward();
        if area > available + QUOTA_EPS {
            return Err(QuotaError::Infeasible { quota: area, available });
        }
        let k = self.prefix_reward.partition_point(|&r| r < area - QUOTA_EPS);
        Ok(k.max(1))
    }

    fn prefix_for_scaled(&self, quota: i64) -> Result<usize, QuotaError> {
        let available = *self.prefix_scaled.last().unwrap();
        if quota > available {
            return Err(QuotaError::Infeasible {
                quota: self.scaled.to_area(quota),
                available: self.scaled.to_area(available),
            });
        }
        let k = self.prefix_scaled.partition_point(|&r| r < quota);
        Ok(k.max(1))
    }

    /// Closed tour from the start collecting reward at least `area`.
    pub fn tour_for_area(&mut self, area: f64) -> Result<QuotaTour, QuotaError> {
        let k = self.prefix_for_area(area)?;
        Ok(self.prefix_tour(k).clone())
    }

    /// Closed tour collecting at least `quota` scaled reward units.
    pub fn tour_for_scaled(&mut self, quota: i64) -> Result<QuotaTour, QuotaError> {
        let k = self.prefix_for_scaled(quota)?;
        Ok(self.prefix_tour(k).clone())
    }

    fn fits(&mut self, quota: i64, budget: f64) -> bool {
        match self.prefix_for_scaled(quota) {
            Ok(k) => self.prefix_tour(k).tour.length <= budget + 1e-9,
            Err(_) => false,
        }
    }

    /// Largest scaled quota whose tour has length at most `budget`, found by
    /// binary search over `{1, …, M|R|}`.
    ///
    /// The answer is taken from the monotone envelope of every tour this
    /// planner has evaluated, so for non-decreasing budgets queried on one
    /// planner the returned quota never decreases.
    pub fn max_quota_within_budget(&mut self, budget: f64) -> (i64, QuotaTour) {
        let total = *self.prefix_scaled.last().unwrap();
        let mut lo = self.prefix_scaled[1];
        let mut hi = total;
        if !self.fits(hi, budget) {
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if self.fits(mid, budget) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        }
        let best_k = self
            .cache
            .iter()
            .filter(|(_, t)| t.tour.length <= budget + 1e-9)
            .map(|(&k, _)| k)
            .max_by_key(|&k| (self.prefix_scaled[k], std::cmp::Reverse(k)))
            .unwrap_or(1);
        let quota = self.prefix_scaled[best_k];
        (quota, self.prefix_tour(best_k).clone())
    }
}

/// Convenience wrapper building the metric internally.
pub fn quota_tour(graph: &DualGraph, grid: &PixelGrid, start: usize, area: f64) -> Result<QuotaTour, QuotaError> {
    let metric = GraphMetric::new(graph)?;
    let mut planner = QuotaPlanner::new(graph, grid, &metric, start);
    planner.tour_for_area(area)
}

/// Convenience wrapper building the metric internally.
pub fn max_quota_within_budget(
    graph: &DualGraph,
    grid: &PixelGrid,
    start: usize,
    budget: f64,
) -> Result<(i64, QuotaTour), QuotaError> {
    let metric = GraphMetric::new(graph)?;
    let mut planner = QuotaPlanner::new(graph, grid, &metric, start);
    Ok(planner.max_quota_within_budget(budget))
}

/// Reward collected by a set of nodes (each counted once).
pub fn collected_reward(nodes: &[usize], rewards: &[f64]) -> f64 {
    let mut seen = std::collections::HashSet::new();
    nodes.iter().filter(|v| seen.insert(**v)).map(|&v| rewards[v]).sum()
}
