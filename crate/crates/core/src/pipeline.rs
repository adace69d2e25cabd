//! End-to-end runs shared by the command line and the browser demo:
//! discretize, plan with a chosen algorithm, score, simulate, compare.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::discretize::{discretize, DiscretizeError, DualGraph, GridKind, Motion, PixelGrid};
use crate::geometry::{GeometryError, PolygonalRegion};
use crate::heuristics::{exponential_tree_heuristic, min_latency_heuristic, CapMode, DEFAULT_EPSILON};
use crate::quota::{tour_route, QuotaError, QuotaPlanner};
use crate::schedule::{coverage_profile, expected_detection_time, exponential_plan_with, Expectation, ScheduleError};
use crate::sim::{compare, monte_carlo, CompareRow, Cutter, SimulationReport, Stopwatch};
use crate::tours::{GraphMetric, Route, TourError};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Discretize(#[from] DiscretizeError),
    #[error(transparent)]
    Tour(#[from] TourError),
    #[error(transparent)]
    Quota(#[from] QuotaError),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error("{0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    ExpTree,
    MinLatency,
    ExpPlan,
    Quota,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::ExpTree => "exptree",
            Algorithm::MinLatency => "minlatency",
            Algorithm::ExpPlan => "expplan",
            Algorithm::Quota => "quota",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanRequest {
    pub algorithm: Algorithm,
    pub grid: GridKind,
    pub motion: Motion,
    pub cap_mode: CapMode,
    pub epsilon: f64,
    /// Area quota, for `quota`.
    pub quota: Option<f64>,
    /// Length budget, for `quota` when no area is given.
    pub budget: Option<f64>,
}

impl PlanRequest {
    pub fn new(algorithm: Algorithm) -> Self {
        PlanRequest {
            algorithm,
            grid: GridKind::Square,
            motion: Motion::Rectilinear,
            cap_mode: CapMode::Nodes,
            epsilon: DEFAULT_EPSILON,
            quota: None,
            budget: None,
        }
    }
}

/// Discretized region with its metric.
pub struct Workspace {
    pub grid: PixelGrid,
    pub graph: DualGraph,
    pub metric: GraphMetric,
}

impl Workspace {
    pub fn build(region: &PolygonalRegion, grid: GridKind, motion: Motion) -> Result<Self, PipelineError> {
        let motion = if grid == GridKind::Hexagonal { Motion::Triangular } else { motion };
        let (grid, graph) = discretize(region, grid, motion)?;
        let metric = GraphMetric::new(&graph)?;
        Ok(Workspace { grid, graph, metric })
    }
}

/// Route file contents: the route plus enough metadata to rebuild its grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteFile {
    #[serde(flatten)]
    pub route: Route,
    pub algorithm: Algorithm,
    pub grid: GridKind,
    pub motion: Motion,
    pub node_count: usize,
    pub length: f64,
    #[serde(rename = "expected_T")]
    pub expected: Expectation,
    /// Reward collected by the route (area units).
    pub covered: f64,
}

#[derive(Debug, Clone)]
pub struct PlanOutcome {
    pub route: Route,
    pub expected: Expectation,
    pub covered: f64,
    /// Planner time, given the grid and its shortest-path metric.
    pub planning_seconds: f64,
    /// Largest per-leg slack of the doubling schedule, when used.
    pub measured_c: Option<f64>,
}

impl PlanOutcome {
    pub fn to_file(&self, request: &PlanRequest, ws: &Workspace) -> RouteFile {
        RouteFile {
            route: self.route.clone(),
            algorithm: request.algorithm,
            grid: ws.grid.kind,
            motion: ws.graph.motion,
            node_count: ws.grid.len(),
            length: self.route.length(),
            expected: self.expected,
            covered: self.covered,
        }
    }
}

fn plan_route(ws: &Workspace, request: &PlanRequest) -> Result<(Route, Option<f64>), PipelineError> {
    let start = ws.grid.start_index;
    Ok(match request.algorithm {
        Algorithm::ExpTree => (
            exponential_tree_heuristic(&ws.graph, &ws.grid, &ws.metric, start, request.cap_mode),
            None,
        ),
        Algorithm::MinLatency => {
            if request.epsilon.is_nan() || request.epsilon <= 0.0 {
                return Err(PipelineError::Config("epsilon must be positive".into()));
            }
            (
                min_latency_heuristic(&ws.graph, &ws.grid, &ws.metric, start, request.epsilon),
                None,
            )
        }
        Algorithm::ExpPlan => {
            let plan = exponential_plan_with(&ws.graph, &ws.grid, &ws.metric, start);
            (plan.route, Some(plan.measured_c))
        }
        Algorithm::Quota => {
            let mut planner = QuotaPlanner::new(&ws.graph, &ws.grid, &ws.metric, start);
            let qt = match (request.quota, request.budget) {
                (Some(a), _) => planner.tour_for_area(a)?,
                (None, Some(b)) => planner.max_quota_within_budget(b).1,
                (None, None) => return Err(PipelineError::Config("quota needs --quota or --budget".into())),
            };
            (tour_route(&qt.tour, &ws.metric, &ws.graph), Some(qt.slack()))
        }
    })
}

/// Runs one planner on a prepared workspace and scores the route.
pub fn plan_on(ws: &Workspace, request: &PlanRequest) -> Result<PlanOutcome, PipelineError> {
    let clock = Stopwatch::start();
    let (route, measured_c) = plan_route(ws, request)?;
    let planning_seconds = clock.seconds();
    let profile = coverage_profile(&route, &ws.grid, &ws.graph)?;
    Ok(PlanOutcome {
        expected: expected_detection_time(&profile),
        covered: profile.final_covered(),
        route,
        planning_seconds,
        measured_c,
    })
}

/// Discretizes, builds the metric and plans.
pub fn plan(region: &PolygonalRegion, request: &PlanRequest) -> Result<(Workspace, PlanOutcome), PipelineError> {
    let ws = Workspace::build(region, request.grid, request.motion)?;
    let out = plan_on(&ws, request)?;
    Ok((ws, out))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub grid: GridKind,
    pub motion: Motion,
    pub cutter: Cutter,
    pub cap_mode: CapMode,
    pub epsilon: f64,
    pub trials: usize,
    pub seed: u64,
    /// Each planner is timed this many times; the fastest run is reported.
    pub timing_repeats: usize,
    /// Report zero for every timing field, making the output reproducible byte for byte.
    pub omit_timing: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            grid: GridKind::Square,
            motion: Motion::Rectilinear,
            cutter: Cutter::SQUARE,
            cap_mode: CapMode::Nodes,
            epsilon: DEFAULT_EPSILON,
            trials: 1000,
            seed: 0,
            timing_repeats: 3,
            omit_timing: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchEntry {
    pub algorithm: Algorithm,
    pub outcome: PlanOutcome,
    pub report: SimulationReport,
}

#[derive(Debug, Clone)]
pub struct BenchResult {
    pub node_count: usize,
    pub entries: Vec<BenchEntry>,
    /// Rows named by algorithm; `wall_time_seconds` is the planning time.
    pub rows: Vec<CompareRow>,
    /// Exponential tree mean over minimum latency mean.
    pub mean_ratio: f64,
}

/// Plans with the exponential tree and minimum latency heuristics on one
/// shared grid and metric, and simulates both against the same targets.
pub fn bench(region: &PolygonalRegion, cfg: &BenchConfig) -> Result<BenchResult, PipelineError> {
    if cfg.trials == 0 {
        return Err(PipelineError::Config("trials must be at least 1".into()));
    }
    let ws = Workspace::build(region, cfg.grid, cfg.motion)?;
    let mut entries = Vec::new();
    for algorithm in [Algorithm::ExpTree, Algorithm::MinLatency] {
        let request = PlanRequest {
            algorithm,
            grid: cfg.grid,
            motion: cfg.motion,
            cap_mode: cfg.cap_mode,
            epsilon: cfg.epsilon,
            quota: None,
            budget: None,
        };
        let mut outcome = plan_on(&ws, &request)?;
        for _ in 1..cfg.timing_repeats {
            let again = plan_on(&ws, &request)?;
            outcome.planning_seconds = outcome.planning_seconds.min(again.planning_seconds);
        }
        let mut report = monte_carlo(&outcome.route, &ws.grid.centers, region, cfg.cutter, cfg.trials, cfg.seed)?;
        // the comparison column reports planning time
        report.wall_time = outcome.planning_seconds;
        if cfg.omit_timing {
            report.wall_time = 0.0;
            outcome.planning_seconds = 0.0;
        }
        entries.push(BenchEntry {
            algorithm,
            outcome,
            report,
        });
    }
    let named: Vec<(String, SimulationReport)> = entries
        .iter()
        .map(|e| (e.algorithm.name().to_string(), e.report.clone()))
        .collect();
    let rows = compare(&named);
    let mean_ratio = entries[0].report.mean / entries[1].report.mean;
    Ok(BenchResult {
        node_count: ws.grid.len(),
        entries,
        rows,
        mean_ratio,
    })
}
