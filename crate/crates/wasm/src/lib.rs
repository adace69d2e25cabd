//! Browser bindings: generate a region, plan a route, score it and probe
//! single targets. Every call takes and returns JSON strings.

use serde::Serialize;
use serde_json::json;
use wasm_bindgen::prelude::*;

use mowsearch::pipeline::plan_on;
use mowsearch::{
    coverage_profile, first_detection_time, monte_carlo, random_region, render_svg, Algorithm, Cutter, CutterShape,
    GridKind, Motion, PlanRequest, Point, PolygonalRegion, RegionGenConfig, Scene, Workspace,
};

fn parse<T: serde::de::DeserializeOwned>(what: &str, text: &str) -> Result<T, String> {
    serde_json::from_str(text).map_err(|e| format!("{what}: {e}"))
}

fn algorithm(name: &str) -> Result<Algorithm, String> {
    parse("algorithm", &format!("\"{name}\""))
}

fn motion(name: &str) -> Result<(GridKind, Motion), String> {
    match name {
        "hex" | "hexagonal" | "triangular" => Ok((GridKind::Hexagonal, Motion::Triangular)),
        other => Ok((GridKind::Square, parse("motion", &format!("\"{other}\""))?)),
    }
}

fn cutter(name: &str) -> Result<Cutter, String> {
    parse::<CutterShape>("cutter", &format!("\"{name}\"")).map(Cutter::of_shape)
}

fn to_json(value: &impl Serialize) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

struct Planned {
    region: PolygonalRegion,
    ws: Workspace,
    outcome: mowsearch::pipeline::PlanOutcome,
}

fn plan_inner(region_json: &str, algorithm_name: &str, motion_name: &str) -> Result<Planned, String> {
    let region: PolygonalRegion = parse("region", region_json)?;
    let (grid, motion) = motion(motion_name)?;
    let mut request = PlanRequest::new(algorithm(algorithm_name)?);
    request.grid = grid;
    request.motion = motion;
    if request.algorithm == Algorithm::Quota {
        request.quota = Some(region.area() / 2.0);
    }
    let ws = Workspace::build(&region, grid, motion).map_err(|e| e.to_string())?;
    let outcome = plan_on(&ws, &request).map_err(|e| e.to_string())?;
    Ok(Planned { region, ws, outcome })
}

/// Region JSON for a seeded random region (`benchmark`, `small` or `tiny`).
pub fn generate(seed: u32, preset: &str) -> Result<String, String> {
    let cfg = match preset {
        "benchmark" => RegionGenConfig::benchmark(),
        "small" => RegionGenConfig::small(),
        "tiny" => RegionGenConfig::tiny(),
        other => return Err(format!("unknown preset {other}")),
    };
    to_json(&random_region(seed as u64, &cfg))
}

/// Plans a route: `{svg, node_count, length, expected_T, covered, curve}` where
/// `curve` is the covered fraction as a step function of time.
pub fn plan(region_json: &str, algorithm_name: &str, motion_name: &str) -> Result<String, String> {
    let p = plan_inner(region_json, algorithm_name, motion_name)?;
    let profile = coverage_profile(&p.outcome.route, &p.ws.grid, &p.ws.graph).map_err(|e| e.to_string())?;
    let curve: Vec<(f64, f64)> = profile
        .breakpoints
        .iter()
        .map(|&(t, c)| (t, c / profile.total_area))
        .collect();
    let svg = render_svg(
        &p.region,
        &Scene {
            grid: Some(&p.ws.grid),
            route: Some(&p.outcome.route),
            ..Scene::default()
        },
    );
    to_json(&json!({
        "svg": svg,
        "node_count": p.ws.grid.len(),
        "length": p.outcome.route.length(),
        "expected_T": p.outcome.expected.finite(),
        "covered": p.outcome.covered,
        "curve": curve,
    }))
}

/// Detection time of one target: `{time, inside, svg}`; `time` is null when
/// the route never reaches it.
pub fn detect(region_json: &str, algorithm_name: &str, motion_name: &str, cutter_name: &str, x: f64, y: f64) -> Result<String, String> {
    let p = plan_inner(region_json, algorithm_name, motion_name)?;
    let target = Point::new(x, y);
    let time = first_detection_time(&p.outcome.route, &p.ws.grid.centers, target, cutter(cutter_name)?);
    let svg = render_svg(
        &p.region,
        &Scene {
            grid: Some(&p.ws.grid),
            route: Some(&p.outcome.route),
            target: Some(target),
            width: None,
        },
    );
    to_json(&json!({ "time": time, "inside": p.region.contains_point(target), "svg": svg }))
}

/// Monte Carlo report for the planned route.
pub fn simulate(region_json: &str, algorithm_name: &str, motion_name: &str, cutter_name: &str, trials: u32, seed: u32) -> Result<String, String> {
    if trials == 0 {
        return Err("trials must be at least 1".into());
    }
    let p = plan_inner(region_json, algorithm_name, motion_name)?;
    let report = monte_carlo(
        &p.outcome.route,
        &p.ws.grid.centers,
        &p.region,
        cutter(cutter_name)?,
        trials as usize,
        seed as u64,
    )
    .map_err(|e| e.to_string())?;
    to_json(&json!({
        "report": report,
        "expected_T": p.outcome.expected.finite(),
        "standard_error": report.standard_error(),
    }))
}

#[wasm_bindgen(js_name = generateRegion)]
pub fn generate_region(seed: u32, preset: &str) -> Result<String, JsError> {
    generate(seed, preset).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = planRoute)]
pub fn plan_route(region_json: &str, algorithm_name: &str, motion_name: &str) -> Result<String, JsError> {
    plan(region_json, algorithm_name, motion_name).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = detectTarget)]
pub fn detect_target(region_json: &str, algorithm_name: &str, motion_name: &str, cutter_name: &str, x: f64, y: f64) -> Result<String, JsError> {
    detect(region_json, algorithm_name, motion_name, cutter_name, x, y).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = simulateRoute)]
pub fn simulate_route(region_json: &str, algorithm_name: &str, motion_name: &str, cutter_name: &str, trials: u32, seed: u32) -> Result<String, JsError> {
    simulate(region_json, algorithm_name, motion_name, cutter_name, trials, seed).map_err(|e| JsError::new(&e))
}
