//! Search planning on pixelated polygonal regions.
//!
//! A region (polygon with holes) is cut into unit pixels whose rewards are
//! their areas inside the region. Planners build routes on the dual grid
//! graph: quota tours, a doubling schedule of budgeted tours, the exponential
//! tree heuristic and a minimum latency baseline. Routes are scored by the
//! exact pixel-model expected detection time and by a Monte Carlo simulation
//! with a continuous cutter footprint.
//!
//! ```
//! use mowsearch::{discretize, exponential_tree_heuristic, CapMode, GraphMetric, GridKind, Motion,
//!     Point, PolygonalRegion, coverage_profile, expected_detection_time};
//!
//! let region = PolygonalRegion::rectangle(Point::new(0.0, 0.0), Point::new(3.0, 3.0), Point::new(1.5, 1.5))?;
//! let (grid, graph) = discretize(&region, GridKind::Square, Motion::Rectilinear)?;
//! let metric = GraphMetric::new(&graph)?;
//! let route = exponential_tree_heuristic(&graph, &grid, &metric, grid.start_index, CapMode::Nodes);
//! let e = expected_detection_time(&coverage_profile(&route, &grid, &graph)?);
//! assert!(e.finite().is_some());
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod discretize;
pub mod geometry;
pub mod heuristics;
pub mod pipeline;
pub mod quota;
pub mod regiongen;
pub mod render;
pub mod schedule;
pub mod sim;
pub mod tours;

pub use discretize::{
    build_dual_graph, build_hex_grid, build_square_grid, discretize, DiscretizeError, DualGraph, GridDump, GridKind,
    Motion, PixelGrid,
};
pub use geometry::{GeometryError, Point, PolygonalRegion, RegionSpec};
pub use heuristics::{exponential_tree_heuristic, min_latency_heuristic, CapMode, DEFAULT_EPSILON};
pub use pipeline::{bench, plan, Algorithm, BenchConfig, PipelineError, PlanRequest, RouteFile, Workspace};
pub use quota::{max_quota_within_budget, quota_tour, QuotaError, QuotaPlanner, QuotaTour};
pub use regiongen::{random_lattice_region, random_region, RegionGenConfig};
pub use render::{render_svg, Scene};
pub use schedule::{
    axis_swap, coverage_profile, expected_detection_time, exponential_plan, CoverageProfile, Expectation,
    ScheduleError, SearchPlan,
};
pub use sim::{compare, rows_to_csv, first_detection_time, monte_carlo, CompareRow, Cutter, CutterShape, SimulationReport};
pub use tours::{GraphMetric, Metric, Route, TourError};
