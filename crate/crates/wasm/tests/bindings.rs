use mowsearch_wasm::{detect, generate, plan, simulate};
use serde_json::Value;

const SQUARE3: &str = r#"{"outer": [[0,0],[3,0],[3,3],[0,3]], "start": [1.5,1.5]}"#;

fn value(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn generated_region_plans_with_every_algorithm() {
    let region = generate(4, "small").unwrap();
    for alg in ["exptree", "minlatency", "expplan", "quota"] {
        for motion in ["rectilinear", "arbitrary", "hex"] {
            let v = value(&plan(&region, alg, motion).unwrap());
            assert!(v["svg"].as_str().unwrap().starts_with("<svg"));
            let curve = v["curve"].as_array().unwrap();
            let last = curve.last().unwrap()[1].as_f64().unwrap();
            assert!(last > 0.0 && last <= 1.0 + 1e-12, "{alg} {motion}");
        }
    }
    assert!(generate(1, "huge").is_err());
}

#[test]
fn square_plan_covers_everything() {
    let v = value(&plan(SQUARE3, "exptree", "rectilinear").unwrap());
    assert_eq!(v["node_count"], 9);
    assert!((v["covered"].as_f64().unwrap() - 9.0).abs() < 1e-9);
    assert!(v["expected_T"].as_f64().unwrap() > 0.0);
    assert!(plan(SQUARE3, "fastest", "rectilinear").is_err());
    assert!(plan("{}", "exptree", "rectilinear").is_err());
}

#[test]
fn start_pixel_target_is_found_at_once() {
    let v = value(&detect(SQUARE3, "exptree", "rectilinear", "square", 1.6, 1.4).unwrap());
    assert_eq!(v["time"], 0.0);
    assert_eq!(v["inside"], true);
    assert!(v["svg"].as_str().unwrap().contains("class=\"target\""));
    let far = value(&detect(SQUARE3, "exptree", "rectilinear", "square", 2.9, 0.1).unwrap());
    assert!(far["time"].as_f64().unwrap() > 0.0);
}

#[test]
fn simulation_is_seeded() {
    let a = simulate(SQUARE3, "minlatency", "rectilinear", "circle", 200, 3).unwrap();
    let v = value(&a);
    assert_eq!(v["report"]["trials"], 200);
    assert_eq!(v["report"]["undetected"], 0);
    let b = value(&simulate(SQUARE3, "minlatency", "rectilinear", "circle", 200, 3).unwrap());
    assert_eq!(v["report"]["mean"], b["report"]["mean"]);
    assert!(simulate(SQUARE3, "minlatency", "rectilinear", "circle", 0, 3).is_err());
}
