//! Coverage profiles, expected detection time and the budget-doubling search plan.
//!
//! Coverage is credited per pixel: a pixel counts as covered from the first
//! time the route reaches its center. For a target distributed over pixels
//! in proportion to their rewards this makes `E[T]` exact:
//! `E[T] = Σ r(p) · t(p) / |R|`, which is also the integral of the uncovered
//! fraction over time and, after swapping the axes, of the latency over the
//! uncovered fraction.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::discretize::{DualGraph, PixelGrid};
use crate::quota::{tour_route, QuotaPlanner};
use crate::tours::{GraphMetric, Route, TourError};

#[derive(Debug, Error, PartialEq)]
pub enum ScheduleError {
    #[error("route is not realized on the dual graph: {0}")]
    NotRealized(#[from] TourError),
    #[error("route does not start at the start node {expected} (starts at {got})")]
    WrongStart { expected: usize, got: usize },
}

/// Covered area as a step function of time, plus per-pixel latencies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageProfile {
    /// `(t, covered)` with strictly increasing `t`; `covered` is the
    /// cumulative reward of pixels with latency ≤ `t`.
    pub breakpoints: Vec<(f64, f64)>,
    pub total_area: f64,
    /// First-coverage time of each pixel; `None` if never reached.
    pub pixel_latency: Vec<Option<f64>>,
    pub rewards: Vec<f64>,
}

/// `E[T]`, or infinity when part of the region is never covered.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Finite(f64),
    Infinite { uncovered_fraction: f64 },
}

impl Expectation {
    pub fn finite(self) -> Option<f64> {
        match self {
            Expectation::Finite(e) => Some(e),
            Expectation::Infinite { .. } => None,
        }
    }

    /// `f64::INFINITY` for incomplete coverage.
    pub fn value(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

impl CoverageProfile {
    /// Builds a profile from per-pixel latencies.
    pub fn from_latencies(rewards: Vec<f64>, pixel_latency: Vec<Option<f64>>) -> Self {
        let total_area: f64 = rewards.iter().sum();
        let mut events: Vec<(f64, f64)> = pixel_latency
            .iter()
            .zip(&rewards)
            .filter_map(|(t, &r)| t.map(|t| (t, r)))
            .collect();
        events.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut breakpoints: Vec<(f64, f64)> = Vec::new();
        let mut covered = 0.0;
        for (t, r) in events {
            covered += r;
            match breakpoints.last_mut() {
                Some(last) if last.0 == t => last.1 = covered,
                _ => breakpoints.push((t, covered)),
            }
        }
        CoverageProfile {
            breakpoints,
            total_area,
            pixel_latency,
            rewards,
        }
    }

    /// Covered area at time `t`.
    pub fn covered_at(&self, t: f64) -> f64 {
        let k = self.breakpoints.partition_point(|&(bt, _)| bt <= t);
        if k == 0 {
            0.0
        } else {
            self.breakpoints[k - 1].1
        }
    }

    pub fn final_covered(&self) -> f64 {
        self.breakpoints.last().map_or(0.0, |b| b.1)
    }

    /// Uncovered reward of positive-reward pixels never reached, as a fraction.
    pub fn uncovered_fraction(&self) -> f64 {
        let missing: f64 = self
            .pixel_latency
            .iter()
            .zip(&self.rewards)
            .filter(|(t, _)| t.is_none())
            .map(|(_, r)| r)
            .sum();
        if self.total_area > 0.0 {
            missing / self.total_area
        } else {
            0.0
        }
    }

    pub fn is_complete(&self) -> bool {
        self.pixel_latency
            .iter()
            .zip(&self.rewards)
            .all(|(t, &r)| t.is_some() || r == 0.0)
    }

    /// `(t, uncovered fraction)` steps of `f(t) = 1 − covered(t)/|R|`, starting at `t = 0`.
    pub fn uncovered_steps(&self) -> Vec<(f64, f64)> {
        let mut steps = Vec::with_capacity(self.breakpoints.len() + 1);
        if self.breakpoints.first().is_none_or(|b| b.0 > 0.0) {
            steps.push((0.0, 1.0));
        }
        for &(t, c) in &self.breakpoints {
            steps.push((t, 1.0 - c / self.total_area));
        }
        steps
    }
}

/// Latencies of each pixel along a realized route.
pub fn coverage_profile(route: &Route, grid: &PixelGrid, graph: &DualGraph) -> Result<CoverageProfile, ScheduleError> {
    route.validate(graph)?;
    if route.start() != grid.start_index {
        return Err(ScheduleError::WrongStart {
            expected: grid.start_index,
            got: route.start(),
        });
    }
    let mut latency = vec![None; grid.len()];
    for (&v, &t) in route.waypoints.iter().zip(&route.cumulative_length) {
        if latency[v].is_none() {
            latency[v] = Some(t);
        }
    }
    Ok(CoverageProfile::from_latencies(grid.rewards.clone(), latency))
}

/// `E[T] = Σ r(p) t(p) / |R|`.
pub fn expected_detection_time(profile: &CoverageProfile) -> Expectation {
    if !profile.is_complete() {
        return Expectation::Infinite {
            uncovered_fraction: profile.uncovered_fraction(),
        };
    }
    if profile.total_area <= 0.0 {
        return Expectation::Finite(0.0);
    }
    let weighted: f64 = profile
        .pixel_latency
        .iter()
        .zip(&profile.rewards)
        .filter_map(|(t, r)| t.map(|t| t * r))
        .sum();
    Expectation::Finite(weighted / profile.total_area)
}

/// The inverse view of the uncovered-fraction curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwappedProfile {
    /// `(p, t)`: for uncovered fractions in `(p, previous p]` the minimum
    /// latency is `t`. The first step's upper end is 1.
    pub steps: Vec<(f64, f64)>,
}

impl SwappedProfile {
    /// `∫₀¹ f'(p) dp` by summing the steps.
    pub fn integral(&self) -> f64 {
        let mut upper = 1.0;
        let mut acc = 0.0;
        for &(p, t) in &self.steps {
            acc += t * (upper - p);
            upper = p;
        }
        acc
    }

    /// Minimum latency at which the uncovered fraction drops below `p`.
    pub fn latency_at(&self, p: f64) -> f64 {
        let mut result = 0.0;
        for &(lower, t) in &self.steps {
            result = t;
            if p > lower {
                break;
            }
        }
        result
    }
}

/// Swaps the axes of the uncovered-fraction curve.
pub fn axis_swap(profile: &CoverageProfile) -> SwappedProfile {
    let steps = profile
        .uncovered_steps()
        .into_iter()
        .filter(|&(_, u)| u < 1.0)
        .map(|(t, u)| (u, t))
        .collect();
    SwappedProfile { steps }
}

/// `∫₀^∞ f(t) dt` of the uncovered-fraction step function (infinite if
/// coverage never completes).
pub fn uncovered_integral(profile: &CoverageProfile) -> f64 {
    let steps = profile.uncovered_steps();
    let mut acc = 0.0;
    for w in steps.windows(2) {
        acc += w[0].1 * (w[1].0 - w[0].0);
    }
    match steps.last() {
        Some(&(_, u)) if u > 1e-12 => f64::INFINITY,
        _ => acc,
    }
}

/// One tour of the doubling schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanLeg {
    pub budget: f64,
    /// Scaled quota `Ā_j`.
    pub quota: i64,
    pub tour: Vec<usize>,
    pub length: f64,
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchPlan {
    pub legs: Vec<PlanLeg>,
    pub route: Route,
    /// Largest per-leg slack (tour length over a walk lower bound), at least 1.
    pub measured_c: f64,
    pub scale: i64,
}

/// Plan dump: `{"legs":[{"budget","quota","tour"}], "route":[…], "expected_T"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanDump {
    pub legs: Vec<PlanLeg>,
    pub route: Vec<usize>,
    #[serde(rename = "expected_T")]
    pub expected_t: Option<f64>,
    pub measured_c: f64,
}

impl PlanDump {
    pub fn new(plan: &SearchPlan, expected: Expectation) -> Self {
        PlanDump {
            legs: plan.legs.clone(),
            route: plan.route.waypoints.clone(),
            expected_t: expected.finite(),
            measured_c: plan.measured_c,
        }
    }
}

/// Budgets 2, 4, 8, …: each leg is the largest-quota tour within the
/// budget, returning to the start; stops once a leg collects everything.
pub fn exponential_plan_with(
    graph: &DualGraph,
    grid: &PixelGrid,
    metric: &GraphMetric,
    start: usize,
) -> SearchPlan {
    let mut planner = QuotaPlanner::new(graph, grid, metric, start);
    let total = planner.scaled().scaled_total;
    let mut legs: Vec<PlanLeg> = Vec::new();
    let mut route = Route::at(start);
    let mut measured_c: f64 = 1.0;
    let mut j = 1;
    loop {
        let budget = 2f64.powi(j);
        let (quota, qt) = planner.max_quota_within_budget(budget);
        route.begin_leg();
        let realized = tour_route(&qt.tour, metric, graph);
        route.follow(&realized.waypoints[1..], metric, graph);
        measured_c = measured_c.max(qt.slack());
        legs.push(PlanLeg {
            budget,
            quota,
            tour: qt.tour.nodes.clone(),
            length: qt.tour.length,
            slack: qt.slack(),
        });
        if quota >= total || grid.len() == 1 {
            break;
        }
        j += 1;
    }
    SearchPlan {
        legs,
        route,
        measured_c,
        scale: planner.scaled().scale,
    }
}

pub fn exponential_plan(graph: &DualGraph, grid: &PixelGrid, start: usize) -> Result<SearchPlan, ScheduleError> {
    let metric = GraphMetric::new(graph)?;
    Ok(exponential_plan_with(graph, grid, &metric, start))
}
