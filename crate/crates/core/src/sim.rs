//! Continuous-footprint detection times along routes and Monte Carlo
//! evaluation over uniformly random targets.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{GeometryError, Point, PolygonalRegion};
use crate::tours::Route;

/// Containment slack so targets on a footprint boundary count as covered.
const CONTAIN_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum CutterShape {
    #[default]
    Square,
    Circle,
}

/// Footprint centered on the robot: a square of half side `half_extent`
/// or a disk of radius `half_extent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cutter {
    pub shape: CutterShape,
    pub half_extent: f64,
}

impl Cutter {
    /// Unit square, side 1.
    pub const SQUARE: Cutter = Cutter {
        shape: CutterShape::Square,
        half_extent: 0.5,
    };
    /// Unit circle, radius 1.
    pub const CIRCLE: Cutter = Cutter {
        shape: CutterShape::Circle,
        half_extent: 1.0,
    };

    pub fn of_shape(shape: CutterShape) -> Self {
        match shape {
            CutterShape::Square => Self::SQUARE,
            CutterShape::Circle => Self::CIRCLE,
        }
    }

    pub fn contains(&self, robot: Point, target: Point) -> bool {
        let d = target - robot;
        let h = self.half_extent + CONTAIN_EPS;
        match self.shape {
            CutterShape::Square => d.x.abs() <= h && d.y.abs() <= h,
            CutterShape::Circle => d.x * d.x + d.y * d.y <= h * h,
        }
    }

    /// Earliest `s ∈ [0, len]` with the cutter at `a + s·u` containing `target`.
    fn first_contact(&self, a: Point, u: Point, len: f64, target: Point) -> Option<f64> {
        let h = self.half_extent + CONTAIN_EPS;
        let d = a - target;
        match self.shape {
            CutterShape::Square => {
                let (mut lo, mut hi) = (0.0f64, len);
                for (dc, uc) in [(d.x, u.x), (d.y, u.y)] {
                    if uc.abs() < 1e-15 {
                        if dc.abs() > h {
                            return None;
                        }
                        continue;
                    }
                    // |dc + s·uc| ≤ h
                    let s1 = (-h - dc) / uc;
                    let s2 = (h - dc) / uc;
                    lo = lo.max(s1.min(s2));
                    hi = hi.min(s1.max(s2));
                }
                (lo <= hi).then_some(lo)
            }
            CutterShape::Circle => {
                // |d + s·u|² ≤ h², |u| = 1
                let b = d.x * u.x + d.y * u.y;
                let c = d.x * d.x + d.y * d.y - h * h;
                if c <= 0.0 {
                    return Some(0.0);
                }
                let disc = b * b - c;
                if disc < 0.0 {
                    return None;
                }
                let s = -b - disc.sqrt();
                (s >= 0.0 && s <= len).then_some(s)
            }
        }
    }
}

/// Arc length at which the cutter first contains `target` while the robot
/// follows the polyline through `centers[route.waypoints[k]]`.
pub fn first_detection_time(route: &Route, centers: &[Point], target: Point, cutter: Cutter) -> Option<f64> {
    let first = centers[route.waypoints[0]];
    if cutter.contains(first, target) {
        return Some(0.0);
    }
    for k in 1..route.waypoints.len() {
        let a = centers[route.waypoints[k - 1]];
        let b = centers[route.waypoints[k]];
        let len = a.dist(b);
        if len == 0.0 {
            continue;
        }
        // cheap reject: the swept footprint lies within reach of the segment's box
        let reach = cutter.half_extent * std::f64::consts::SQRT_2 + 1e-9;
        if target.x < a.x.min(b.x) - reach
            || target.x > a.x.max(b.x) + reach
            || target.y < a.y.min(b.y) - reach
            || target.y > a.y.max(b.y) + reach
        {
            continue;
        }
        let u = Point::new((b.x - a.x) / len, (b.y - a.y) / len);
        if let Some(s) = cutter.first_contact(a, u, len, target) {
            // scale onto the route's own arc-length parameter
            let t0 = route.cumulative_length[k - 1];
            let t1 = route.cumulative_length[k];
            return Some(t0 + (t1 - t0) * s / len);
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub trials: usize,
    /// Mean detection time over detected targets.
    pub mean: f64,
    /// Sample standard deviation (n − 1) over detected targets.
    pub std: f64,
    pub undetected: usize,
    pub wall_time: f64,
    pub seed: u64,
}

impl SimulationReport {
    /// Standard error of the mean.
    pub fn standard_error(&self) -> f64 {
        let n = self.trials - self.undetected;
        if n == 0 {
            0.0
        } else {
            self.std / (n as f64).sqrt()
        }
    }
}

/// Target of trial `i`: the stream `i` of a ChaCha8 generator keyed by `seed`.
pub fn trial_target(region: &PolygonalRegion, seed: u64, trial: u64) -> Result<Point, GeometryError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    region.sample_with(&mut rng)
}

fn run_trials(
    route: &Route,
    centers: &[Point],
    region: &PolygonalRegion,
    cutter: Cutter,
    trials: usize,
    seed: u64,
) -> Result<Vec<Option<f64>>, GeometryError> {
    let one = |i: usize| -> Result<Option<f64>, GeometryError> {
        let target = trial_target(region, seed, i as u64)?;
        Ok(first_detection_time(route, centers, target, cutter))
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..trials).into_par_iter().map(one).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..trials).map(one).collect()
    }
}

/// Summary statistics over detection times; `None` entries count as undetected.
pub fn summarize(times: &[Option<f64>], seed: u64, wall_time: f64) -> SimulationReport {
    let detected: Vec<f64> = times.iter().flatten().copied().collect();
    let n = detected.len();
    let mean = if n == 0 { 0.0 } else { detected.iter().sum::<f64>() / n as f64 };
    let std = if n < 2 {
        0.0
    } else {
        (detected.iter().map(|t| (t - mean) * (t - mean)).sum::<f64>() / (n - 1) as f64).sqrt()
    };
    SimulationReport {
        trials: times.len(),
        mean,
        std,
        undetected: times.len() - n,
        wall_time,
        seed,
    }
}

/// Detection-time statistics for `trials` uniform targets in `region`.
pub fn monte_carlo(
    route: &Route,
    centers: &[Point],
    region: &PolygonalRegion,
    cutter: Cutter,
    trials: usize,
    seed: u64,
) -> Result<SimulationReport, GeometryError> {
    let clock = Stopwatch::start();
    let times = run_trials(route, centers, region, cutter, trials, seed)?;
    Ok(summarize(&times, seed, clock.seconds()))
}

/// Wall clock that reads zero where no monotonic clock exists (wasm32).
#[derive(Debug, Clone, Copy)]
pub struct Stopwatch {
    #[cfg(not(target_arch = "wasm32"))]
    at: std::time::Instant,
}

impl Stopwatch {
    pub fn start() -> Self {
        Stopwatch {
            #[cfg(not(target_arch = "wasm32"))]
            at: std::time::Instant::now(),
        }
    }

    pub fn seconds(&self) -> f64 {
        #[cfg(not(target_arch = "wasm32"))]
        {
            self.at.elapsed().as_secs_f64()
        }
        #[cfg(target_arch = "wasm32")]
        {
            0.0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub name: String,
    pub mean: f64,
    pub std: f64,
    pub wall_time_seconds: f64,
    pub trials: usize,
    pub seed: u64,
}

/// One row per named report, in input order.
pub fn compare(reports: &[(String, SimulationReport)]) -> Vec<CompareRow> {
    reports
        .iter()
        .map(|(name, r)| CompareRow {
            name: name.clone(),
            mean: r.mean,
            std: r.std,
            wall_time_seconds: r.wall_time,
            trials: r.trials,
            seed: r.seed,
        })
        .collect()
}

/// CSV with a header row: name, mean, std, wall_time_seconds, trials, seed.
pub fn rows_to_csv(rows: &[CompareRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flushing to memory")).expect("csv output is UTF-8")
}
