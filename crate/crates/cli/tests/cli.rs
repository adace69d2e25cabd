use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mowsearch::{coverage_profile, expected_detection_time, RouteFile, Workspace};
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mowsearch")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const SQUARE3: &str = r#"{"outer": [[0,0],[3,0],[3,3],[0,3]], "start": [1.5,1.5]}"#;
const WITH_HOLE: &str =
    r#"{"outer": [[0,0],[5.5,0],[5.5,4.2],[0,4.2]], "holes": [[[1.3,1.1],[2.6,1.1],[2.6,2.9],[1.3,2.9]]], "start": [0.5,0.5]}"#;

/// `key=value` fields of a summary line.
fn field(line: &str, key: &str) -> f64 {
    line.split_whitespace()
        .find_map(|kv| kv.strip_prefix(&format!("{key}=")))
        .unwrap()
        .parse()
        .unwrap()
}

fn assert_diagnostic(o: &Output, code: i32, kind: &str) {
    assert_eq!(o.status.code(), Some(code));
    let err = String::from_utf8(o.stderr.clone()).unwrap();
    let line: serde_json::Value = serde_json::from_str(err.lines().last().unwrap()).unwrap();
    assert_eq!(line["kind"], kind);
    assert_eq!(line["level"], "error");
}

fn plan(dir: &TempDir, region: &Path, extra: &[&str]) -> (Output, PathBuf) {
    let out = dir.path().join("plan");
    let mut args = vec!["plan", "--region", s(region), "--out", s(&out)];
    args.extend_from_slice(extra);
    (run(&args), out.join("route.json"))
}

#[test]
fn discretize_square_summary() {
    let dir = TempDir::new().unwrap();
    let r = write(&dir, "r.json", SQUARE3);
    let out = dir.path().join("o");
    let o = run(&["discretize", "--region", s(&r), "--out", s(&out)]);
    assert!(o.status.success());
    let line = stdout(&o);
    assert_eq!(field(&line, "N"), 9.0);
    assert_eq!(field(&line, "sum_r"), 9.0);
    let dump: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("grid.json")).unwrap()).unwrap();
    assert_eq!(dump["kind"], "square");
    assert_eq!(dump["centers"].as_array().unwrap().len(), 9);
    assert_eq!(dump["rewards"].as_array().unwrap().len(), 9);
    assert_eq!(dump["edges"][0].as_array().unwrap().len(), 3);
}

#[test]
fn discretize_conserves_area_around_holes() {
    let dir = TempDir::new().unwrap();
    let r = write(&dir, "r.json", WITH_HOLE);
    let o = run(&["discretize", "--region", s(&r), "--out", s(dir.path())]);
    assert!(o.status.success());
    let line = stdout(&o);
    let (sum, area) = (field(&line, "sum_r"), field(&line, "area"));
    assert!((area - (5.5 * 4.2 - 1.3 * 1.8)).abs() < 1e-9);
    assert!((sum - area).abs() < 1e-9);
}

#[test]
fn malformed_regions_exit_with_input_error() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "{not json");
    assert_diagnostic(&run(&["discretize", "--region", s(&bad)]), 2, "input");
    let no_start = write(&dir, "ns.json", r#"{"outer": [[0,0],[1,0],[1,1]]}"#);
    let o = run(&["discretize", "--region", s(&no_start)]);
    assert_diagnostic(&o, 2, "input");
    assert!(String::from_utf8_lossy(&o.stderr).contains("start"));
    let outside = write(&dir, "os.json", r#"{"outer": [[0,0],[1,0],[1,1]], "start": [5,5]}"#);
    assert_diagnostic(&run(&["discretize", "--region", s(&outside)]), 2, "input");
    let missing = dir.path().join("missing.json");
    assert_diagnostic(&run(&["discretize", "--region", s(&missing)]), 2, "input");
    assert_diagnostic(&run(&["plan", "--region", s(&bad), "--algorithm", "sideways"]), 2, "input");
}

#[test]
fn plan_exptree_covers_square_and_reports_expectation() {
    let dir = TempDir::new().unwrap();
    let r = write(&dir, "r.json", SQUARE3);
    let (o, route) = plan(&dir, &r, &["--algorithm", "exptree"]);
    assert!(o.status.success());
    let file: RouteFile = serde_json::from_str(&std::fs::read_to_string(&route).unwrap()).unwrap();
    assert!((file.covered - 9.0).abs() < 1e-9);
    let region = serde_json::from_str(SQUARE3).unwrap();
    let ws = Workspace::build(&region, file.grid, file.motion).unwrap();
    let e = expected_detection_time(&coverage_profile(&file.route, &ws.grid, &ws.graph).unwrap());
    assert_eq!(e, file.expected);
    assert!((field(&stdout(&o), "expected_T") - e.value()).abs() < 1e-5);
}

#[test]
fn quota_plans_full_coverage_or_fail_as_infeasible() {
    let dir = TempDir::new().unwrap();
    let r = write(&dir, "r.json", SQUARE3);
    let (o, route) = plan(&dir, &r, &["--algorithm", "quota", "--quota", "9"]);
    assert!(o.status.success());
    let file: RouteFile = serde_json::from_str(&std::fs::read_to_string(route).unwrap()).unwrap();
    assert!((file.covered - 9.0).abs() < 1e-9);
    assert_eq!(file.route.visit_order().len(), 9);
    assert_eq!(file.route.start(), file.route.end());

    let (o, _) = plan(&dir, &r, &["--algorithm", "quota", "--quota", "9.5"]);
    assert_diagnostic(&o, 3, "infeasible");
    let (o, _) = plan(&dir, &r, &["--algorithm", "quota"]);
    assert_diagnostic(&o, 2, "input");
    let (o, _) = plan(&dir, &r, &["--algorithm", "quota", "--budget", "4"]);
    assert!(o.status.success());
    assert!(field(&stdout(&o), "length") <= 4.0);
}

#[test]
fn simulate_defaults_are_reproducible() {
    let dir = TempDir::new().unwrap();
    let r = write(&dir, "r.json", SQUARE3);
    let (_, route) = plan(&dir, &r, &["--algorithm", "minlatency"]);
    let sim = |out: &str| {
        let o = run(&["simulate", "--region", s(&r), "--route", s(&route), "--seed", "7", "--out", out]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        (
            std::fs::read(Path::new(out).join("report.json")).unwrap(),
            std::fs::read(Path::new(out).join("report.csv")).unwrap(),
        )
    };
    let a = sim(s(&dir.path().join("a")));
    let b = sim(s(&dir.path().join("b")));
    assert_eq!(a, b);
    let report: serde_json::Value = serde_json::from_slice(&a.0).unwrap();
    assert_eq!(report["trials"], 1000);
    assert_eq!(report["undetected"], 0);
    assert_eq!(report["seed"], 7);
    let csv = String::from_utf8(a.1).unwrap();
    assert!(csv.starts_with("name,mean,std,wall_time_seconds,trials,seed\nminlatency,"));
}

#[test]
fn simulate_rejects_route_from_another_region() {
    let dir = TempDir::new().unwrap();
    let r = write(&dir, "r.json", SQUARE3);
    let other = write(&dir, "o.json", WITH_HOLE);
    let (_, route) = plan(&dir, &r, &["--algorithm", "exptree"]);
    let o = run(&["simulate", "--region", s(&other), "--route", s(&route)]);
    assert_diagnostic(&o, 2, "input");
    assert!(String::from_utf8_lossy(&o.stderr).contains("mismatch"));
    let shifted = write(&dir, "s.json", r#"{"outer": [[0,0],[3,0],[3,3],[0,3]], "start": [0.5,0.5]}"#);
    assert_diagnostic(&run(&["simulate", "--region", s(&shifted), "--route", s(&route)]), 2, "input");
    assert_diagnostic(&run(&["render", "--region", s(&other), "--route", s(&route)]), 2, "input");
}

#[test]
fn bench_prints_two_rows_and_ratio() {
    let o = run(&["bench", "--trials", "200", "--omit-timing", "--region-seed", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "name,mean,std,wall_time_seconds,trials,seed");
    assert!(lines[1].starts_with("exptree,"));
    assert!(lines[2].starts_with("minlatency,"));
    let mean = |l: &str| l.split(',').nth(1).unwrap().parse::<f64>().unwrap();
    let ratio: f64 = lines[3].strip_prefix("mean_ratio,").unwrap().parse().unwrap();
    assert!((ratio - mean(lines[1]) / mean(lines[2])).abs() < 1e-5);
    assert_eq!(stdout(&run(&["bench", "--trials", "200", "--omit-timing", "--region-seed", "3"])), text);
}

#[test]
fn render_draws_well_formed_svg() {
    let dir = TempDir::new().unwrap();
    let r = write(&dir, "r.json", WITH_HOLE);
    let out = dir.path().join("svg");
    let o = run(&["render", "--region", s(&r), "--out", s(&out), "--target", "3.1,2.2"]);
    assert!(o.status.success());
    let svg = std::fs::read_to_string(out.join("route.svg")).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    assert!(doc.descendants().all(|n| n.attribute("class") != Some("leg")));
    assert!(doc.descendants().any(|n| n.attribute("class") == Some("target")));

    let (_, route) = plan(&dir, &r, &["--algorithm", "expplan"]);
    let file: RouteFile = serde_json::from_str(&std::fs::read_to_string(&route).unwrap()).unwrap();
    assert!(file.route.legs.len() >= 3);
    let o = run(&["render", "--region", s(&r), "--route", s(&route), "--out", s(&out)]);
    assert!(o.status.success());
    let svg = std::fs::read_to_string(out.join("route.svg")).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let legs: Vec<_> = doc.descendants().filter(|n| n.attribute("class") == Some("leg")).collect();
    let first_three: HashSet<&str> = legs.iter().take(3).map(|n| n.attribute("stroke").unwrap()).collect();
    assert_eq!(first_three.len(), 3);
}

#[test]
fn generated_regions_round_trip_through_plan() {
    let dir = TempDir::new().unwrap();
    let a = run(&["generate", "--seed", "11", "--preset", "small"]);
    let b = run(&["generate", "--seed", "11", "--preset", "small"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let r = write(&dir, "g.json", &stdout(&a));
    for alg in ["exptree", "minlatency", "expplan"] {
        let (o, route) = plan(&dir, &r, &["--algorithm", alg, "--motion", "arbitrary"]);
        assert!(o.status.success(), "{alg}");
        let sim = run(&["simulate", "--region", s(&r), "--route", s(&route), "--trials", "50"]);
        assert!(sim.status.success(), "{alg}");
    }
    let (o, route) = plan(&dir, &r, &["--algorithm", "exptree", "--grid", "hex"]);
    assert!(o.status.success());
    let sim = run(&["simulate", "--region", s(&r), "--route", s(&route), "--cutter", "circle", "--trials", "50"]);
    assert!(sim.status.success());
}
