//! Shortest-path metric on the dual graph, greedy reward trees, tree
//! doubling and nearest-neighbor + 2-opt tours and paths.
//!
//! All ties are broken by lowest node index, so every function here is
//! deterministic.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::discretize::DualGraph;
use crate::geometry::Point;

/// Improvements smaller than this are not applied by 2-opt.
pub const IMPROVEMENT_EPS: f64 = 1e-10;

#[derive(Debug, Error, PartialEq)]
pub enum TourError {
    #[error("dual graph is disconnected: node {0} is unreachable from node 0")]
    Disconnected(usize),
    #[error("route step {from} -> {to} is not a graph edge")]
    NotAnEdge { from: usize, to: usize },
    #[error("route references node {0} outside the grid")]
    NodeOutOfRange(usize),
}

/// Symmetric distance oracle over node indices.
pub trait Metric {
    fn distance(&self, a: usize, b: usize) -> f64;
}

/// Straight-line distances between points; used for tests and plain TSP instances.
pub struct EuclideanMetric<'a>(pub &'a [Point]);

impl Metric for EuclideanMetric<'_> {
    fn distance(&self, a: usize, b: usize) -> f64 {
        self.0[a].dist(self.0[b])
    }
}

/// All-pairs shortest paths over a dual graph, with path realization.
#[derive(Debug, Clone)]
pub struct GraphMetric {
    n: usize,
    dist: Vec<f64>,
    /// `pred[s * n + t]` is the node before `t` on the chosen path from `s`.
    pred: Vec<u32>,
}

impl Metric for GraphMetric {
    fn distance(&self, a: usize, b: usize) -> f64 {
        self.dist[a * self.n + b]
    }
}

#[derive(PartialEq)]
struct HeapItem(f64, usize);

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .total_cmp(&self.0)
            .then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn single_source(graph: &DualGraph, src: usize, uniform: bool) -> (Vec<f64>, Vec<u32>) {
    let n = graph.node_count;
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![u32::MAX; n];
    dist[src] = 0.0;
    pred[src] = src as u32;
    if uniform {
        let mut hops = vec![u32::MAX; n];
        hops[src] = 0;
        let step = graph.min_edge_length().unwrap_or(1.0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &(v, _) in graph.neighbors(u) {
                if hops[v] == u32::MAX {
                    hops[v] = hops[u] + 1;
                    dist[v] = hops[v] as f64 * step;
                    pred[v] = u as u32;
                    queue.push_back(v);
                }
            }
        }
    } else {
        let mut heap = BinaryHeap::from([HeapItem(0.0, src)]);
        while let Some(HeapItem(d, u)) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &(v, len) in graph.neighbors(u) {
                let nd = d + len;
                if nd < dist[v] - 1e-12 {
                    dist[v] = nd;
                    pred[v] = u as u32;
                    heap.push(HeapItem(nd, v));
                }
            }
        }
    }
    (dist, pred)
}

impl GraphMetric {
    pub fn new(graph: &DualGraph) -> Result<Self, TourError> {
        let n = graph.node_count;
        let uniform = graph.is_uniform();
        let run = |s: usize| single_source(graph, s, uniform);
        #[cfg(feature = "parallel")]
        let rows: Vec<(Vec<f64>, Vec<u32>)> = {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(run).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let rows: Vec<(Vec<f64>, Vec<u32>)> = (0..n).map(run).collect();

        if let Some((t, _)) = rows
            .first()
            .and_then(|(d, _)| d.iter().enumerate().find(|(_, x)| !x.is_finite()))
        {
            return Err(TourError::Disconnected(t));
        }
        let mut dist = Vec::with_capacity(n * n);
        let mut pred = Vec::with_capacity(n * n);
        for (d, p) in rows {
            dist.extend(d);
            pred.extend(p);
        }
        Ok(GraphMetric { n, dist, pred })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Nodes strictly between `a` and `b` on the chosen shortest path.
    pub fn realize(&self, a: usize, b: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = b;
        while cur != a {
            cur = self.pred[a * self.n + cur] as usize;
            if cur != a {
                out.push(cur);
            }
        }
        out.reverse();
        out
    }

    /// The full walk `a, …, b` along graph edges.
    pub fn walk(&self, a: usize, b: usize) -> Vec<usize> {
        let mut w = vec![a];
        if a != b {
            w.extend(self.realize(a, b));
            w.push(b);
        }
        w
    }
}

pub fn shortest_path_metric(graph: &DualGraph) -> Result<GraphMetric, TourError> {
    GraphMetric::new(graph)
}

/// Closed tour: `nodes[0]` is the start and the cycle returns to it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tour {
    pub nodes: Vec<usize>,
    pub length: f64,
}

impl Tour {
    pub fn new(nodes: Vec<usize>, metric: &impl Metric) -> Self {
        let length = cycle_length(&nodes, metric);
        Tour { nodes, length }
    }

    pub fn start(&self) -> usize {
        self.nodes[0]
    }
}

/// Open walk starting at `nodes[0]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Path {
    pub nodes: Vec<usize>,
    pub length: f64,
}

impl Path {
    pub fn new(nodes: Vec<usize>, metric: &impl Metric) -> Self {
        let length = path_length(&nodes, metric);
        Path { nodes, length }
    }
}

pub fn path_length(nodes: &[usize], metric: &impl Metric) -> f64 {
    nodes.windows(2).map(|w| metric.distance(w[0], w[1])).sum()
}

pub fn cycle_length(nodes: &[usize], metric: &impl Metric) -> f64 {
    if nodes.len() < 2 {
        return 0.0;
    }
    path_length(nodes, metric) + metric.distance(nodes[nodes.len() - 1], nodes[0])
}

/// Tree grown from a root; `nodes` are in insertion order.
#[derive(Debug, Clone, PartialEq)]
pub struct RewardTree {
    pub nodes: Vec<usize>,
    /// `parents[k]` is the parent of `nodes[k]` (`None` for the root).
    pub parents: Vec<Option<usize>>,
    /// Graph edge length from each node to its parent (0 for the root).
    pub edge_lengths: Vec<f64>,
    /// Whether each node was in the exclusion set when added.
    pub already_visited: Vec<bool>,
}

impl RewardTree {
    pub fn root(&self) -> usize {
        self.nodes[0]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn cost(&self) -> f64 {
        self.edge_lengths.iter().sum()
    }

    /// Tree nodes not flagged as already visited, root always included.
    pub fn fresh_nodes(&self) -> Vec<usize> {
        self.nodes
            .iter()
            .zip(&self.already_visited)
            .enumerate()
            .filter(|&(k, (_, &seen))| k == 0 || !seen)
            .map(|(_, (&v, _))| v)
            .collect()
    }
}

/// Stopping rule for greedy tree growth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TreeCap {
    /// At most this many nodes.
    Nodes(usize),
    /// Total edge cost at most this value.
    Cost(f64),
}

#[derive(PartialEq)]
struct Frontier(f64, usize);

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .total_cmp(&other.0)
            .then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Incremental greedy growth: repeatedly adds the frontier node of largest
/// reward (lowest index on ties). Iterating yields nodes in insertion order.
pub struct GreedyGrowth<'a> {
    graph: &'a DualGraph,
    rewards: &'a [f64],
    in_tree: Vec<bool>,
    parent: Vec<Option<usize>>,
    heap: BinaryHeap<Frontier>,
    started: Option<usize>,
}

impl<'a> GreedyGrowth<'a> {
    pub fn new(graph: &'a DualGraph, rewards: &'a [f64], start: usize) -> Self {
        GreedyGrowth {
            graph,
            rewards,
            in_tree: vec![false; graph.node_count],
            parent: vec![None; graph.node_count],
            heap: BinaryHeap::new(),
            started: Some(start),
        }
    }

    fn add(&mut self, v: usize) {
        self.in_tree[v] = true;
        for &(w, _) in self.graph.neighbors(v) {
            if !self.in_tree[w] && self.parent[w].is_none() {
                self.parent[w] = Some(v);
                self.heap.push(Frontier(self.rewards[w], w));
            }
        }
    }

    /// Parent edge length of the next node, without consuming it.
    fn peek_cost(&self) -> Option<f64> {
        self.heap.peek().map(|f| {
            let p = self.parent[f.1].unwrap();
            self.graph.edge_length(p, f.1).unwrap()
        })
    }
}

impl Iterator for GreedyGrowth<'_> {
    /// `(node, parent, parent edge length)`
    type Item = (usize, Option<usize>, f64);

    fn next(&mut self) -> Option<Self::Item> {
        if let Some(s) = self.started.take() {
            self.add(s);
            return Some((s, None, 0.0));
        }
        let Frontier(_, v) = self.heap.pop()?;
        let p = self.parent[v].unwrap();
        let len = self.graph.edge_length(p, v).unwrap();
        self.add(v);
        Some((v, Some(p), len))
    }
}

/// Greedy maximum-reward tree rooted at `start`.
///
/// Nodes in `exclude` can still join the tree (for connectivity) and are
/// flagged in `already_visited`.
pub fn greedy_reward_tree(
    graph: &DualGraph,
    rewards: &[f64],
    start: usize,
    cap: TreeCap,
    exclude: &[bool],
) -> RewardTree {
    let mut growth = GreedyGrowth::new(graph, rewards, start);
    let mut tree = RewardTree {
        nodes: Vec::new(),
        parents: Vec::new(),
        edge_lengths: Vec::new(),
        already_visited: Vec::new(),
    };
    let mut cost = 0.0;
    loop {
        match cap {
            TreeCap::Nodes(k) if tree.len() >= k.max(1) => break,
            TreeCap::Cost(c) if !tree.is_empty() => match growth.peek_cost() {
                Some(step) if cost + step <= c + 1e-9 => {}
                _ => break,
            },
            _ => {}
        }
        let Some((v, p, len)) = growth.next() else { break };
        cost += len;
        tree.nodes.push(v);
        tree.parents.push(p);
        tree.edge_lengths.push(len);
        tree.already_visited.push(exclude.get(v).copied().unwrap_or(false));
    }
    tree
}

/// Depth-first preorder of the tree (children by index), shortcut into a tour.
pub fn double_tree_tour(tree: &RewardTree, metric: &impl Metric) -> Tour {
    let root = tree.root();
    let mut children: std::collections::HashMap<usize, Vec<usize>> = std::collections::HashMap::new();
    for (&v, p) in tree.nodes.iter().zip(&tree.parents) {
        if let Some(p) = p {
            children.entry(*p).or_default().push(v);
        }
    }
    for list in children.values_mut() {
        list.sort_unstable_by(|a, b| b.cmp(a));
    }
    let mut order = Vec::with_capacity(tree.len());
    let mut stack = vec![root];
    while let Some(u) = stack.pop() {
        order.push(u);
        if let Some(c) = children.get(&u) {
            stack.extend(c.iter().copied());
        }
    }
    Tour::new(order, metric)
}

fn nearest_neighbor_order(nodes: &[usize], metric: &impl Metric, start: usize) -> Vec<usize> {
    let mut rest: Vec<usize> = nodes.iter().copied().filter(|&v| v != start).collect();
    rest.sort_unstable();
    rest.dedup();
    let mut order = Vec::with_capacity(rest.len() + 1);
    order.push(start);
    let mut cur = start;
    while !rest.is_empty() {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (k, &v) in rest.iter().enumerate() {
            let d = metric.distance(cur, v);
            if d < best_d - 1e-12 {
                best = k;
                best_d = d;
            }
        }
        cur = rest.remove(best);
        order.push(cur);
    }
    order
}

/// First-improvement 2-opt on a cycle with `order[0]` fixed.
pub fn two_opt_cycle(order: &mut [usize], metric: &impl Metric) {
    let n = order.len();
    if n < 4 {
        return;
    }
    let mut improved = true;
    while improved {
        improved = false;
        for i in 1..n - 1 {
            for k in (i + 1)..n {
                let a = order[i - 1];
                let b = order[i];
                let c = order[k];
                let d = order[(k + 1) % n];
                let delta = metric.distance(a, c) + metric.distance(b, d)
                    - metric.distance(a, b)
                    - metric.distance(c, d);
                if delta < -IMPROVEMENT_EPS {
                    order[i..=k].reverse();
                    improved = true;
                }
            }
        }
    }
}

/// First-improvement 2-opt on an open path with `order[0]` fixed and a free end.
pub fn two_opt_path(order: &mut [usize], metric: &impl Metric) {
    let n = order.len();
    if n < 3 {
        return;
    }
    let mut improved = true;
    while improved {
        improved = false;
        for i in 1..n - 1 {
            for k in (i + 1)..n {
                let a = order[i - 1];
                let b = order[i];
                let c = order[k];
                let mut delta = metric.distance(a, c) - metric.distance(a, b);
                if k + 1 < n {
                    let d = order[k + 1];
                    delta += metric.distance(b, d) - metric.distance(c, d);
                }
                if delta < -IMPROVEMENT_EPS {
                    order[i..=k].reverse();
                    improved = true;
                }
            }
        }
    }
}

/// Nearest-neighbor tour from `start`, improved by 2-opt to a local optimum.
pub fn tsp_tour(nodes: &[usize], metric: &impl Metric, start: usize) -> Tour {
    let mut order = nearest_neighbor_order(nodes, metric, start);
    two_opt_cycle(&mut order, metric);
    Tour::new(order, metric)
}

/// 2-opt improvement of an existing visiting order (start fixed).
pub fn improve_tour(mut order: Vec<usize>, metric: &impl Metric) -> Tour {
    two_opt_cycle(&mut order, metric);
    Tour::new(order, metric)
}

/// Open path from `start` through all nodes.
pub fn tsp_path(nodes: &[usize], metric: &impl Metric, start: usize) -> Path {
    let mut order = nearest_neighbor_order(nodes, metric, start);
    two_opt_path(&mut order, metric);
    Path::new(order, metric)
}

/// A walk realized on the dual graph: consecutive waypoints are adjacent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Route {
    pub waypoints: Vec<usize>,
    pub cumulative_length: Vec<f64>,
    /// Waypoint indices at which each leg begins (for rendering).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub legs: Vec<usize>,
}

impl Route {
    pub fn at(start: usize) -> Self {
        Route {
            waypoints: vec![start],
            cumulative_length: vec![0.0],
            legs: Vec::new(),
        }
    }

    /// Polyline through `centers[waypoints[k]]` with Euclidean arc lengths.
    /// No adjacency check is made.
    pub fn from_waypoints(waypoints: Vec<usize>, centers: &[Point]) -> Self {
        let mut cumulative_length = Vec::with_capacity(waypoints.len());
        let mut acc = 0.0;
        for (k, &w) in waypoints.iter().enumerate() {
            if k > 0 {
                acc += centers[waypoints[k - 1]].dist(centers[w]);
            }
            cumulative_length.push(acc);
        }
        Route {
            waypoints,
            cumulative_length,
            legs: Vec::new(),
        }
    }

    pub fn start(&self) -> usize {
        self.waypoints[0]
    }

    pub fn end(&self) -> usize {
        *self.waypoints.last().unwrap()
    }

    pub fn length(&self) -> f64 {
        self.cumulative_length.last().copied().unwrap_or(0.0)
    }

    /// Appends the shortest-path walk to `target`.
    pub fn travel_to(&mut self, target: usize, metric: &GraphMetric, graph: &DualGraph) {
        let from = self.end();
        if from == target {
            return;
        }
        let mut prev = from;
        for v in metric.realize(from, target).into_iter().chain([target]) {
            let step = graph.edge_length(prev, v).expect("realized walks follow edges");
            let acc = self.length() + step;
            self.waypoints.push(v);
            self.cumulative_length.push(acc);
            prev = v;
        }
    }

    /// Marks the start of a new leg at the current end of the route.
    pub fn begin_leg(&mut self) {
        let at = self.waypoints.len() - 1;
        if self.legs.last() != Some(&at) {
            self.legs.push(at);
        }
    }

    /// Visits `stops` in order along shortest paths.
    pub fn follow(&mut self, stops: &[usize], metric: &GraphMetric, graph: &DualGraph) {
        for &s in stops {
            self.travel_to(s, metric, graph);
        }
    }

    /// Checks node range, edge adjacency and prefix sums against `graph`.
    pub fn validate(&self, graph: &DualGraph) -> Result<(), TourError> {
        for &w in &self.waypoints {
            if w >= graph.node_count {
                return Err(TourError::NodeOutOfRange(w));
            }
        }
        for k in 1..self.waypoints.len() {
            let (a, b) = (self.waypoints[k - 1], self.waypoints[k]);
            let len = graph
                .edge_length(a, b)
                .ok_or(TourError::NotAnEdge { from: a, to: b })?;
            let step = self.cumulative_length[k] - self.cumulative_length[k - 1];
            if (step - len).abs() > 1e-6 {
                return Err(TourError::NotAnEdge { from: a, to: b });
            }
        }
        Ok(())
    }

    /// Distinct nodes in first-visit order.
    pub fn visit_order(&self) -> Vec<usize> {
        let mut seen = std::collections::HashSet::new();
        self.waypoints.iter().copied().filter(|v| seen.insert(*v)).collect()
    }
}
