use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use mowsearch::pipeline::plan_on;
use mowsearch::{
    bench, compare, monte_carlo, random_region, render_svg, rows_to_csv, Algorithm, BenchConfig, CapMode, Cutter,
    CutterShape, GridDump, GridKind, Motion, PipelineError, PlanRequest, Point, PolygonalRegion, QuotaError,
    RegionGenConfig, RouteFile, Scene, TourError, Workspace, DEFAULT_EPSILON,
};

#[derive(Parser)]
#[command(name = "mowsearch", version, about = "Plan, simulate and draw search routes on polygonal regions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cut a region into pixels and dump the grid graph.
    Discretize(DiscretizeArgs),
    /// Plan a route and write it as JSON.
    Plan(PlanArgs),
    /// Monte Carlo detection times of a planned route.
    Simulate(SimulateArgs),
    /// Compare the exponential tree and minimum latency heuristics.
    Bench(BenchArgs),
    /// Draw a region, its pixels and optionally a route as SVG.
    Render(RenderArgs),
    /// Write a seeded random test region.
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Exptree,
    Minlatency,
    Expplan,
    Quota,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Exptree => Algorithm::ExpTree,
            AlgorithmArg::Minlatency => Algorithm::MinLatency,
            AlgorithmArg::Expplan => Algorithm::ExpPlan,
            AlgorithmArg::Quota => Algorithm::Quota,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GridArg {
    Square,
    Hex,
}

impl From<GridArg> for GridKind {
    fn from(g: GridArg) -> Self {
        match g {
            GridArg::Square => GridKind::Square,
            GridArg::Hex => GridKind::Hexagonal,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MotionArg {
    Rectilinear,
    Arbitrary,
}

impl From<MotionArg> for Motion {
    fn from(m: MotionArg) -> Self {
        match m {
            MotionArg::Rectilinear => Motion::Rectilinear,
            MotionArg::Arbitrary => Motion::Arbitrary,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CutterArg {
    Square,
    Circle,
}

impl From<CutterArg> for Cutter {
    fn from(c: CutterArg) -> Self {
        Cutter::of_shape(match c {
            CutterArg::Square => CutterShape::Square,
            CutterArg::Circle => CutterShape::Circle,
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CapArg {
    Nodes,
    Cost,
}

impl From<CapArg> for CapMode {
    fn from(c: CapArg) -> Self {
        match c {
            CapArg::Nodes => CapMode::Nodes,
            CapArg::Cost => CapMode::Cost,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    Benchmark,
    Small,
    Tiny,
}

#[derive(Args)]
struct GridOpts {
    /// Pixel shape; hexagonal grids always use triangular motion.
    #[arg(long, value_enum, default_value = "square")]
    grid: GridArg,
    #[arg(long, value_enum, default_value = "rectilinear")]
    motion: MotionArg,
}

#[derive(Args)]
struct DiscretizeArgs {
    #[arg(long)]
    region: PathBuf,
    #[command(flatten)]
    grid: GridOpts,
    /// Output directory; the grid goes to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PlanArgs {
    #[arg(long)]
    region: PathBuf,
    #[arg(long, value_enum)]
    algorithm: AlgorithmArg,
    #[command(flatten)]
    grid: GridOpts,
    /// Area quota for the quota planner.
    #[arg(long)]
    quota: Option<f64>,
    /// Length budget for the quota planner.
    #[arg(long)]
    budget: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, value_enum, default_value = "nodes")]
    cap_mode: CapArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    region: PathBuf,
    /// Route file written by `plan`.
    #[arg(long)]
    route: PathBuf,
    #[arg(long, value_enum, default_value = "square")]
    cutter: CutterArg,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Record the simulation wall time (the report is then not reproducible).
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Region file; defaults to a generated benchmark region.
    #[arg(long)]
    region: Option<PathBuf>,
    /// Seed of the generated region when no file is given.
    #[arg(long, default_value_t = 0)]
    region_seed: u64,
    #[command(flatten)]
    grid: GridOpts,
    #[arg(long, value_enum, default_value = "square")]
    cutter: CutterArg,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, value_enum, default_value = "nodes")]
    cap_mode: CapArg,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write zero for every timing column.
    #[arg(long)]
    omit_timing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    region: PathBuf,
    /// Route file; without one only the region and grid are drawn.
    #[arg(long)]
    route: Option<PathBuf>,
    #[command(flatten)]
    grid: GridOpts,
    /// Target marker as `x,y`.
    #[arg(long, value_parser = parse_point)]
    target: Option<Point>,
    /// Leave out the pixel grid.
    #[arg(long)]
    no_grid: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "benchmark")]
    preset: PresetArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_point(s: &str) -> Result<Point, String> {
    let (x, y) = s.split_once(',').ok_or("expected x,y")?;
    let x: f64 = x.trim().parse().map_err(|e| format!("{e}"))?;
    let y: f64 = y.trim().parse().map_err(|e| format!("{e}"))?;
    Ok(Point::new(x, y))
}

/// Bad files, flags or mismatched inputs (exit 2).
#[derive(Debug)]
struct InputError(String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn classify(err: &anyhow::Error) -> (u8, &'static str) {
    for cause in err.chain() {
        if cause.is::<InputError>() {
            return (2, "input");
        }
        if let Some(p) = cause.downcast_ref::<PipelineError>() {
            return match p {
                PipelineError::Quota(QuotaError::Infeasible { .. }) | PipelineError::Tour(TourError::Disconnected(_)) => {
                    (3, "infeasible")
                }
                _ => (2, "input"),
            };
        }
    }
    (1, "internal")
}

fn diagnostic(level: &str, kind: &str, message: &str) {
    eprintln!("{}", json!({ "level": level, "kind": kind, "message": message }));
}

fn read_region(path: &Path) -> Result<PolygonalRegion> {
    let text = fs::read_to_string(path).map_err(|e| InputError(format!("reading region {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| InputError(format!("region {}: {e}", path.display())).into())
}

fn read_route(path: &Path) -> Result<RouteFile> {
    let text = fs::read_to_string(path).map_err(|e| InputError(format!("reading route {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| InputError(format!("route {}: {e}", path.display())).into())
}

/// Writes `contents` to `dir/name`, or to stdout without a directory.
fn emit(out: &Option<PathBuf>, name: &str, contents: &str) -> Result<()> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let path = dir.join(name);
            fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn workspace(region: &PolygonalRegion, grid: GridKind, motion: Motion) -> Result<Workspace> {
    Workspace::build(region, grid, motion).map_err(|e| match e {
        PipelineError::Tour(TourError::Disconnected(_)) => anyhow::Error::new(e),
        other => InputError(other.to_string()).into(),
    })
}

/// Rebuilds the grid a route file was planned on and checks the route against it.
fn matching_workspace(region: &PolygonalRegion, file: &RouteFile) -> Result<Workspace> {
    let ws = workspace(region, file.grid, file.motion)?;
    if ws.grid.len() != file.node_count {
        bail!(InputError(format!(
            "route/region mismatch: route was planned on {} pixels, region has {}",
            file.node_count,
            ws.grid.len()
        )));
    }
    if file.route.waypoints.is_empty() || file.route.waypoints.len() != file.route.cumulative_length.len() {
        bail!(InputError("route/region mismatch: malformed waypoint list".into()));
    }
    if file.route.start() != ws.grid.start_index {
        bail!(InputError("route/region mismatch: route does not begin at the start pixel".into()));
    }
    file.route
        .validate(&ws.graph)
        .map_err(|e| InputError(format!("route/region mismatch: {e}")))?;
    Ok(ws)
}

fn cmd_discretize(a: DiscretizeArgs) -> Result<()> {
    let region = read_region(&a.region)?;
    let ws = workspace(&region, a.grid.grid.into(), a.grid.motion.into())?;
    let dump = GridDump::new(&ws.grid, &ws.graph);
    emit(&a.out, "grid.json", &(serde_json::to_string_pretty(&dump)? + "\n"))?;
    let summary = format!(
        "N={} sum_r={:.9} area={:.9}",
        ws.grid.len(),
        ws.grid.total_reward(),
        region.area()
    );
    if a.out.is_some() {
        println!("{summary}");
    } else {
        diagnostic("info", "summary", &summary);
    }
    Ok(())
}

fn cmd_plan(a: PlanArgs) -> Result<()> {
    let region = read_region(&a.region)?;
    let request = PlanRequest {
        algorithm: a.algorithm.into(),
        grid: a.grid.grid.into(),
        motion: a.grid.motion.into(),
        cap_mode: a.cap_mode.into(),
        epsilon: a.epsilon,
        quota: a.quota,
        budget: a.budget,
    };
    if request.algorithm == Algorithm::Quota && request.quota.is_none() && request.budget.is_none() {
        bail!(InputError("--algorithm quota needs --quota or --budget".into()));
    }
    let ws = workspace(&region, request.grid, request.motion)?;
    let outcome = plan_on(&ws, &request).map_err(|e| match e {
        PipelineError::Config(m) => InputError(m).into(),
        other => anyhow::Error::new(other),
    })?;
    let file = outcome.to_file(&request, &ws);
    emit(&a.out, "route.json", &(serde_json::to_string_pretty(&file)? + "\n"))?;
    let summary = format!(
        "algorithm={} N={} length={:.6} expected_T={} covered={:.6}",
        request.algorithm.name(),
        file.node_count,
        file.length,
        match file.expected.finite() {
            Some(e) => format!("{e:.6}"),
            None => "inf".into(),
        },
        file.covered
    );
    if a.out.is_some() {
        println!("{summary}");
    } else {
        diagnostic("info", "summary", &summary);
    }
    Ok(())
}

fn cmd_simulate(a: SimulateArgs) -> Result<()> {
    if a.trials == 0 {
        bail!(InputError("--trials must be at least 1".into()));
    }
    let region = read_region(&a.region)?;
    let file = read_route(&a.route)?;
    let ws = matching_workspace(&region, &file)?;
    let mut report = monte_carlo(&file.route, &ws.grid.centers, &region, a.cutter.into(), a.trials, a.seed)
        .map_err(|e| InputError(e.to_string()))?;
    if !a.timing {
        report.wall_time = 0.0;
    }
    let json = serde_json::to_string_pretty(&report)? + "\n";
    match &a.out {
        Some(_) => {
            emit(&a.out, "report.json", &json)?;
            let rows = compare(&[(file.algorithm.name().to_string(), report.clone())]);
            emit(&a.out, "report.csv", &rows_to_csv(&rows))?;
            println!(
                "trials={} mean={:.6} std={:.6} undetected={}",
                report.trials, report.mean, report.std, report.undetected
            );
        }
        None => emit(&None, "", &json)?,
    }
    Ok(())
}

fn cmd_bench(a: BenchArgs) -> Result<()> {
    let region = match &a.region {
        Some(p) => read_region(p)?,
        None => random_region(a.region_seed, &RegionGenConfig::benchmark()),
    };
    let cfg = BenchConfig {
        grid: a.grid.grid.into(),
        motion: a.grid.motion.into(),
        cutter: a.cutter.into(),
        cap_mode: a.cap_mode.into(),
        epsilon: a.epsilon,
        trials: a.trials,
        seed: a.seed,
        omit_timing: a.omit_timing,
        ..BenchConfig::default()
    };
    let result = bench(&region, &cfg).map_err(|e| match e {
        PipelineError::Tour(TourError::Disconnected(_)) => anyhow::Error::new(e),
        other => InputError(other.to_string()).into(),
    })?;
    let csv = rows_to_csv(&result.rows);
    if a.out.is_some() {
        emit(&a.out, "bench.csv", &csv)?;
        let summary = json!({
            "node_count": result.node_count,
            "rows": result.rows,
            "mean_ratio": result.mean_ratio,
        });
        emit(&a.out, "bench.json", &(serde_json::to_string_pretty(&summary)? + "\n"))?;
    }
    print!("{csv}");
    println!("mean_ratio,{:.6}", result.mean_ratio);
    Ok(())
}

fn cmd_render(a: RenderArgs) -> Result<()> {
    let region = read_region(&a.region)?;
    let file = a.route.as_deref().map(read_route).transpose()?;
    let ws = match &file {
        Some(f) => matching_workspace(&region, f)?,
        None => workspace(&region, a.grid.grid.into(), a.grid.motion.into())?,
    };
    let scene = Scene {
        grid: (!a.no_grid).then_some(&ws.grid),
        route: file.as_ref().map(|f| &f.route),
        target: a.target,
        width: None,
    };
    emit(&a.out, "route.svg", &render_svg(&region, &scene))
}

fn cmd_generate(a: GenerateArgs) -> Result<()> {
    let cfg = match a.preset {
        PresetArg::Benchmark => RegionGenConfig::benchmark(),
        PresetArg::Small => RegionGenConfig::small(),
        PresetArg::Tiny => RegionGenConfig::tiny(),
    };
    let region = random_region(a.seed, &cfg);
    emit(&a.out, "region.json", &(serde_json::to_string_pretty(&region)? + "\n"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            diagnostic("error", "input", e.to_string().trim());
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Discretize(a) => cmd_discretize(a),
        Command::Plan(a) => cmd_plan(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Render(a) => cmd_render(a),
        Command::Generate(a) => cmd_generate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let (code, kind) = classify(&err);
            diagnostic("error", kind, &format!("{err:#}"));
            ExitCode::from(code)
        }
    }
}
