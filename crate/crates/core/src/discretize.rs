//! Pixel sets, rewards and dual grid graphs.
//!
//! Square pixels are unit cells of an integer lattice shifted so that the
//! start point sits at a pixel center. Circular cutters use flat-top
//! hexagons of diameter 2 whose centers form a triangular lattice with
//! spacing √3. A pixel's reward is the area of its intersection with the
//! region; only pixels with positive reward are kept, except for the start
//! pixel and zero-reward bridge pixels inserted to reconnect the graph.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Point, PolygonalRegion};

/// Rewards at or below this are treated as tangential contact.
pub const REWARD_EPS: f64 = 1e-12;

const SQRT3: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Error, PartialEq)]
pub enum DiscretizeError {
    #[error("region has zero area")]
    EmptyRegion,
    #[error("dual graph expects a {expected:?} grid, got {got:?}")]
    WrongGridKind { expected: GridKind, got: GridKind },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    Square,
    Hexagonal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Motion {
    Rectilinear,
    Arbitrary,
    Triangular,
}

/// Lattice coordinates: `(i, j)` column/row for squares, axial `(q, r)` for hexagons.
pub type Cell = (i64, i64);

const SQUARE_SIDES: [Cell; 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
const SQUARE_DIAGONALS: [Cell; 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];
const HEX_SIDES: [Cell; 6] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)];

#[derive(Debug, Clone, PartialEq)]
pub struct PixelGrid {
    pub kind: GridKind,
    pub centers: Vec<Point>,
    pub rewards: Vec<f64>,
    pub cells: Vec<Cell>,
    /// Offset of the lattice: pixel vertices (square) or the lattice origin
    /// (hexagonal) sit at `origin_shift + integer combinations`.
    pub origin_shift: Point,
    pub start_index: usize,
    /// Nodes inserted only to keep the graph connected; reward is 0.
    pub bridges: Vec<usize>,
}

impl PixelGrid {
    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn total_reward(&self) -> f64 {
        self.rewards.iter().sum()
    }

    pub fn start(&self) -> Point {
        self.centers[self.start_index]
    }

    /// Outline of pixel `i` (counterclockwise).
    pub fn pixel_polygon(&self, i: usize) -> Vec<Point> {
        pixel_outline(self.kind, self.centers[i])
    }

    pub fn index_of(&self, cell: Cell) -> Option<usize> {
        self.cells.iter().position(|&c| c == cell)
    }
}

pub fn pixel_outline(kind: GridKind, c: Point) -> Vec<Point> {
    match kind {
        GridKind::Square => vec![
            Point::new(c.x - 0.5, c.y - 0.5),
            Point::new(c.x + 0.5, c.y - 0.5),
            Point::new(c.x + 0.5, c.y + 0.5),
            Point::new(c.x - 0.5, c.y + 0.5),
        ],
        GridKind::Hexagonal => (0..6)
            .map(|k| {
                let a = std::f64::consts::FRAC_PI_3 * k as f64;
                Point::new(c.x + a.cos(), c.y + a.sin())
            })
            .collect(),
    }
}

fn cell_center(kind: GridKind, start: Point, (a, b): Cell) -> Point {
    match kind {
        GridKind::Square => Point::new(start.x + a as f64, start.y + b as f64),
        GridKind::Hexagonal => Point::new(
            start.x + 1.5 * a as f64,
            start.y + SQRT3 * (b as f64 + 0.5 * a as f64),
        ),
    }
}

fn lattice_sides(kind: GridKind) -> &'static [Cell] {
    match kind {
        GridKind::Square => &SQUARE_SIDES,
        GridKind::Hexagonal => &HEX_SIDES,
    }
}

/// Candidate lattice cells whose pixel can meet the region's bounding box.
fn candidate_cells(kind: GridKind, region: &PolygonalRegion) -> Vec<Cell> {
    let bb = region.bbox();
    let s = region.start();
    let mut out = Vec::new();
    match kind {
        GridKind::Square => {
            let i0 = (bb.min.x - s.x - 0.5).ceil() as i64;
            let i1 = (bb.max.x - s.x + 0.5).floor() as i64;
            let j0 = (bb.min.y - s.y - 0.5).ceil() as i64;
            let j1 = (bb.max.y - s.y + 0.5).floor() as i64;
            for j in j0..=j1 {
                for i in i0..=i1 {
                    out.push((i, j));
                }
            }
        }
        GridKind::Hexagonal => {
            let q0 = ((bb.min.x - s.x - 1.0) / 1.5).floor() as i64;
            let q1 = ((bb.max.x - s.x + 1.0) / 1.5).ceil() as i64;
            for q in q0..=q1 {
                let half = 0.5 * q as f64;
                let r0 = ((bb.min.y - s.y - 1.0) / SQRT3 - half).floor() as i64;
                let r1 = ((bb.max.y - s.y + 1.0) / SQRT3 - half).ceil() as i64;
                for r in r0..=r1 {
                    out.push((q, r));
                }
            }
        }
    }
    out
}

fn compute_rewards(kind: GridKind, region: &PolygonalRegion, cells: &[Cell]) -> Vec<f64> {
    let s = region.start();
    let reward = |c: &Cell| region.clip_area(&pixel_outline(kind, cell_center(kind, s, *c)));
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        cells.par_iter().map(reward).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        cells.iter().map(reward).collect()
    }
}

fn components(kind: GridKind, cells: &HashSet<Cell>, order: &[Cell]) -> Vec<Vec<Cell>> {
    let mut seen: HashSet<Cell> = HashSet::new();
    let mut comps = Vec::new();
    for &c in order {
        if !seen.insert(c) {
            continue;
        }
        let mut comp = vec![c];
        let mut queue = VecDeque::from([c]);
        while let Some(u) = queue.pop_front() {
            for d in lattice_sides(kind) {
                let v = (u.0 + d.0, u.1 + d.1);
                if cells.contains(&v) && seen.insert(v) {
                    comp.push(v);
                    queue.push_back(v);
                }
            }
        }
        comps.push(comp);
    }
    comps
}

/// Adds zero-reward cells along shortest lattice paths until all kept
/// cells form one side-connected component. Returns the added cells.
fn bridge_components(kind: GridKind, kept: &mut HashSet<Cell>, start: Cell) -> Vec<Cell> {
    let mut added = Vec::new();
    loop {
        let mut order: Vec<Cell> = kept.iter().copied().collect();
        order.sort_unstable();
        let comps = components(kind, kept, &order);
        if comps.len() <= 1 {
            return added;
        }
        let home: HashSet<Cell> = comps
            .iter()
            .find(|c| c.contains(&start))
            .expect("start cell is kept")
            .iter()
            .copied()
            .collect();
        let (lo_a, hi_a) = order.iter().fold((i64::MAX, i64::MIN), |(l, h), c| (l.min(c.0), h.max(c.0)));
        let (lo_b, hi_b) = order.iter().fold((i64::MAX, i64::MIN), |(l, h), c| (l.min(c.1), h.max(c.1)));
        let in_bounds = |c: Cell| c.0 >= lo_a - 2 && c.0 <= hi_a + 2 && c.1 >= lo_b - 2 && c.1 <= hi_b + 2;

        let mut home_sorted: Vec<Cell> = home.iter().copied().collect();
        home_sorted.sort_unstable();
        let mut prev: HashMap<Cell, Cell> = HashMap::new();
        let mut queue: VecDeque<Cell> = home_sorted.iter().copied().collect();
        let mut visited: HashSet<Cell> = home.clone();
        let mut target = None;
        'bfs: while let Some(u) = queue.pop_front() {
            for d in lattice_sides(kind) {
                let v = (u.0 + d.0, u.1 + d.1);
                if !in_bounds(v) || !visited.insert(v) {
                    continue;
                }
                prev.insert(v, u);
                if kept.contains(&v) {
                    target = Some(v);
                    break 'bfs;
                }
                queue.push_back(v);
            }
        }
        let mut cur = prev[&target.expect("bounded lattice is connected")];
        while !home.contains(&cur) {
            kept.insert(cur);
            added.push(cur);
            cur = prev[&cur];
        }
    }
}

fn build_grid(kind: GridKind, region: &PolygonalRegion) -> Result<PixelGrid, DiscretizeError> {
    if region.area() <= REWARD_EPS {
        return Err(DiscretizeError::EmptyRegion);
    }
    let start = region.start();
    let candidates = candidate_cells(kind, region);
    let rewards = compute_rewards(kind, region, &candidates);
    let mut reward_of: HashMap<Cell, f64> = HashMap::new();
    let mut kept: HashSet<Cell> = HashSet::new();
    for (c, r) in candidates.iter().zip(&rewards) {
        if *r > REWARD_EPS {
            kept.insert(*c);
            reward_of.insert(*c, *r);
        }
    }
    kept.insert((0, 0));
    let bridge_cells: HashSet<Cell> = bridge_components(kind, &mut kept, (0, 0)).into_iter().collect();

    let mut cells: Vec<Cell> = kept.into_iter().collect();
    // row-major from the bottom: for hexagons 2r + q orders rows by y
    cells.sort_unstable_by_key(|&(a, b)| match kind {
        GridKind::Square => (b, a),
        GridKind::Hexagonal => (2 * b + a, a),
    });
    let centers = cells.iter().map(|&c| cell_center(kind, start, c)).collect();
    let rewards = cells
        .iter()
        .map(|c| reward_of.get(c).copied().unwrap_or(0.0))
        .collect();
    let start_index = cells.iter().position(|&c| c == (0, 0)).unwrap();
    let bridges = cells
        .iter()
        .enumerate()
        .filter(|(_, c)| bridge_cells.contains(c))
        .map(|(i, _)| i)
        .collect();
    let origin_shift = match kind {
        GridKind::Square => Point::new((start.x - 0.5).rem_euclid(1.0), (start.y - 0.5).rem_euclid(1.0)),
        GridKind::Hexagonal => start,
    };
    Ok(PixelGrid {
        kind,
        centers,
        rewards,
        cells,
        origin_shift,
        start_index,
        bridges,
    })
}

/// Unit-square pixels with the start point at a pixel center.
pub fn build_square_grid(region: &PolygonalRegion) -> Result<PixelGrid, DiscretizeError> {
    build_grid(GridKind::Square, region)
}

/// Diameter-2 hexagonal pixels and their triangular adjacency graph.
pub fn build_hex_grid(region: &PolygonalRegion) -> Result<(PixelGrid, DualGraph), DiscretizeError> {
    let grid = build_grid(GridKind::Hexagonal, region)?;
    let graph = DualGraph::from_lattice(&grid, Motion::Triangular, HEX_SIDES.iter());
    Ok((grid, graph))
}

/// Side-adjacency graph of a square grid, with √2 diagonals for arbitrary motion.
pub fn build_dual_graph(grid: &PixelGrid, motion: Motion) -> Result<DualGraph, DiscretizeError> {
    if grid.kind != GridKind::Square {
        return Err(DiscretizeError::WrongGridKind {
            expected: GridKind::Square,
            got: grid.kind,
        });
    }
    match motion {
        Motion::Arbitrary => Ok(DualGraph::from_lattice(
            grid,
            motion,
            SQUARE_SIDES.iter().chain(SQUARE_DIAGONALS.iter()),
        )),
        _ => Ok(DualGraph::from_lattice(grid, Motion::Rectilinear, SQUARE_SIDES.iter())),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "GraphRepr", into = "GraphRepr")]
pub struct DualGraph {
    pub node_count: usize,
    pub motion: Motion,
    edges: Vec<(usize, usize, f64)>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    node_count: usize,
    motion: Motion,
    edges: Vec<(usize, usize, f64)>,
}

impl From<GraphRepr> for DualGraph {
    fn from(r: GraphRepr) -> Self {
        DualGraph::new(r.node_count, r.motion, r.edges)
    }
}

impl From<DualGraph> for GraphRepr {
    fn from(g: DualGraph) -> Self {
        GraphRepr {
            node_count: g.node_count,
            motion: g.motion,
            edges: g.edges,
        }
    }
}

impl DualGraph {
    /// Builds adjacency from an undirected edge list. Neighbor lists are
    /// sorted by node index.
    pub fn new(node_count: usize, motion: Motion, edges: Vec<(usize, usize, f64)>) -> Self {
        let mut adjacency = vec![Vec::new(); node_count];
        for &(a, b, len) in &edges {
            adjacency[a].push((b, len));
            adjacency[b].push((a, len));
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(v, _)| v);
        }
        DualGraph {
            node_count,
            motion,
            edges,
            adjacency,
        }
    }

    fn from_lattice<'a>(grid: &PixelGrid, motion: Motion, offsets: impl Iterator<Item = &'a Cell> + Clone) -> Self {
        let index: HashMap<Cell, usize> = grid.cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut edges = Vec::new();
        for (i, &(a, b)) in grid.cells.iter().enumerate() {
            for d in offsets.clone() {
                if let Some(&j) = index.get(&(a + d.0, b + d.1)) {
                    if i < j {
                        edges.push((i, j, grid.centers[i].dist(grid.centers[j])));
                    }
                }
            }
        }
        edges.sort_by_key(|e| (e.0, e.1));
        DualGraph::new(grid.len(), motion, edges)
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adjacency[v]
    }

    pub fn edge_length(&self, a: usize, b: usize) -> Option<f64> {
        self.adjacency[a].iter().find(|&&(v, _)| v == b).map(|&(_, l)| l)
    }

    /// True when every edge has the same length (BFS suffices for distances).
    pub fn is_uniform(&self) -> bool {
        match self.edges.first() {
            None => true,
            Some(&(_, _, l0)) => self.edges.iter().all(|&(_, _, l)| (l - l0).abs() <= 1e-12),
        }
    }

    pub fn min_edge_length(&self) -> Option<f64> {
        self.edges.iter().map(|e| e.2).reduce(f64::min)
    }

    pub fn is_connected(&self) -> bool {
        if self.node_count == 0 {
            return true;
        }
        let mut seen = vec![false; self.node_count];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &(v, _) in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.node_count
    }
}

/// Debug/CLI dump: `{"kind", "centers", "rewards", "edges"}` plus the start index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridDump {
    pub kind: GridKind,
    pub centers: Vec<Point>,
    pub rewards: Vec<f64>,
    pub edges: Vec<(usize, usize, f64)>,
    pub start_index: usize,
}

impl GridDump {
    pub fn new(grid: &PixelGrid, graph: &DualGraph) -> Self {
        GridDump {
            kind: grid.kind,
            centers: grid.centers.clone(),
            rewards: grid.rewards.clone(),
            edges: graph.edges().to_vec(),
            start_index: grid.start_index,
        }
    }
}

/// Builds the grid and graph for a cutter shape and motion model.
pub fn discretize(
    region: &PolygonalRegion,
    kind: GridKind,
    motion: Motion,
) -> Result<(PixelGrid, DualGraph), DiscretizeError> {
    match kind {
        GridKind::Square => {
            let grid = build_square_grid(region)?;
            let graph = build_dual_graph(&grid, motion)?;
            Ok((grid, graph))
        }
        GridKind::Hexagonal => build_hex_grid(region),
    }
}
