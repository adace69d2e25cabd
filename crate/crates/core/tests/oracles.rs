mod common;

use common::*;
use mowsearch::discretize::{build_hex_grid, build_square_grid, discretize, GridKind, Motion};
use mowsearch::heuristics::{exponential_tree_heuristic, min_latency_heuristic, CapMode, DEFAULT_EPSILON};
use mowsearch::quota::QuotaPlanner;
use mowsearch::regiongen::{random_lattice_region, random_region, RegionGenConfig};
use mowsearch::schedule::{coverage_profile, expected_detection_time, exponential_plan_with};
use mowsearch::tours::{tsp_path, tsp_tour, EuclideanMetric, GraphMetric};
use mowsearch::{Point, PolygonalRegion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn strip(n: usize, start_x: f64) -> PolygonalRegion {
    PolygonalRegion::rectangle(Point::new(0.0, 0.0), Point::new(n as f64, 1.0), Point::new(start_x, 0.5)).unwrap()
}

fn setup(region: &PolygonalRegion) -> (mowsearch::PixelGrid, mowsearch::DualGraph, GraphMetric) {
    let (g, dg) = discretize(region, GridKind::Square, Motion::Rectilinear).unwrap();
    let m = GraphMetric::new(&dg).unwrap();
    (g, dg, m)
}

#[test]
fn oracles_agree_with_each_other() {
    for seed in 0..25 {
        let region = random_lattice_region(seed, &RegionGenConfig::tiny());
        let g = build_square_grid(&region).unwrap();
        if g.len() > 7 {
            continue;
        }
        let d = grid_distances(&g.centers, false);
        let s = g.start_index;
        for area in [0.5, 1.0, 2.5, g.total_reward()] {
            assert_eq!(
                optimal_quota_length(&d, &g.rewards, s, area),
                brute_quota_length(&d, &g.rewards, s, area)
            );
        }
        let (a, b) = (optimal_latency(&d, &g.rewards, s), brute_latency(&d, &g.rewards, s));
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }
}

#[test]
fn strip_quota_three_is_out_and_back() {
    let region = strip(4, 0.5);
    let (g, dg, m) = setup(&region);
    let opt = optimal_quota_length(&grid_distances(&g.centers, false), &g.rewards, 0, 3.0).unwrap();
    assert_eq!(opt, 4.0);
    let qt = QuotaPlanner::new(&dg, &g, &m, 0).tour_for_area(3.0).unwrap();
    assert_eq!(qt.length(), opt);
    assert!(qt.collected_reward >= 3.0);
}

#[test]
fn strip_budget_two_collects_two_pixels() {
    let region = strip(4, 0.5);
    let (g, dg, m) = setup(&region);
    let d = grid_distances(&g.centers, false);
    // largest quota whose optimal tour fits the budget
    let best = (1..=4)
        .filter(|&k| optimal_quota_length(&d, &g.rewards, 0, k as f64).unwrap() <= 2.0)
        .max()
        .unwrap();
    let (q, qt) = QuotaPlanner::new(&dg, &g, &m, 0).max_quota_within_budget(2.0);
    assert_eq!(best, 2);
    assert_eq!(q, 2);
    assert_eq!(qt.length(), 2.0);
}

#[test]
fn plan_on_three_strip_meets_bound() {
    let region = strip(3, 1.5);
    let (g, dg, m) = setup(&region);
    let opt = optimal_latency(&grid_distances(&g.centers, false), &g.rewards, g.start_index);
    assert!((opt - 4.0 / 3.0).abs() < 1e-12);
    let plan = exponential_plan_with(&dg, &g, &m, g.start_index);
    let e = expected_detection_time(&coverage_profile(&plan.route, &g, &dg).unwrap()).value();
    let c = plan.measured_c;
    assert!(e <= 8.0 * c * opt + 2.0 * c, "E = {e}, c = {c}, opt = {opt}");
}

#[test]
fn exptree_on_four_strip_is_within_three_of_optimum() {
    let region = strip(4, 0.5);
    let (g, dg, m) = setup(&region);
    let opt = optimal_latency(&grid_distances(&g.centers, false), &g.rewards, 0);
    assert_eq!(opt, 1.5);
    let r = exponential_tree_heuristic(&dg, &g, &m, 0, CapMode::Nodes);
    let e = expected_detection_time(&coverage_profile(&r, &g, &dg).unwrap()).value();
    assert!(e <= 3.0 * opt, "E = {e}");
}

#[test]
fn six_strip_order_is_latency_optimal() {
    let region = strip(6, 0.5);
    let (g, dg, m) = setup(&region);
    let opt = optimal_latency(&grid_distances(&g.centers, false), &g.rewards, 0);
    let r = min_latency_heuristic(&dg, &g, &m, 0, DEFAULT_EPSILON);
    let e = expected_detection_time(&coverage_profile(&r, &g, &dg).unwrap()).value();
    assert_eq!(opt, 2.5);
    assert_eq!(e, opt);
}

#[test]
fn seven_point_tours_and_paths_are_near_optimal() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let (mut worst_cycle, mut worst_path) = (1.0f64, 1.0f64);
    for _ in 0..100 {
        let pts: Vec<Point> = (0..7).map(|_| Point::new(rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0))).collect();
        let d = euclidean(&pts);
        let metric = EuclideanMetric(&pts);
        let nodes: Vec<usize> = (0..7).collect();
        let t = tsp_tour(&nodes, &metric, 0);
        let p = tsp_path(&nodes, &metric, 0);
        worst_cycle = worst_cycle.max(t.length / brute_cycle(&d));
        worst_path = worst_path.max(p.length / brute_path(&d));
    }
    assert!(worst_cycle <= 1.30, "{worst_cycle}");
    assert!(worst_path <= 1.30, "{worst_path}");
}

#[test]
fn seven_grid_nodes_tour_near_optimal() {
    let region = PolygonalRegion::rectangle(Point::new(0.0, 0.0), Point::new(6.0, 6.0), Point::new(0.5, 0.5)).unwrap();
    let (g, _, m) = setup(&region);
    let d = grid_distances(&g.centers, false);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let mut nodes: Vec<usize> = (0..g.len()).collect();
        for i in 0..7 {
            let j = rng.gen_range(i..nodes.len());
            nodes.swap(i, j);
        }
        nodes.truncate(7);
        let sub: Vec<Vec<f64>> = nodes.iter().map(|&a| nodes.iter().map(|&b| d[a][b]).collect()).collect();
        let t = tsp_tour(&nodes, &m, nodes[0]);
        assert!(t.length <= 1.30 * brute_cycle(&sub) + 1e-9);
    }
}

#[test]
fn hex_disk_has_seven_pixels() {
    let ring: Vec<Point> = (0..180)
        .map(|k| {
            let a = std::f64::consts::TAU * k as f64 / 180.0;
            Point::new(2.0 * a.cos(), 2.0 * a.sin())
        })
        .collect();
    let region = PolygonalRegion::new(ring, vec![], Point::new(0.0, 0.0)).unwrap();
    let (g, _) = build_hex_grid(&region).unwrap();
    assert_eq!(g.len(), 7);
    let hex_area = 1.5 * 3f64.sqrt();
    assert!((g.rewards[g.start_index] - hex_area).abs() < 1e-9);
    for i in 0..g.len() {
        // midpoint rule over the bounding square of the hexagon, masked to the hexagon
        let c = g.centers[i];
        let hexagon = PolygonalRegion::new(g.pixel_polygon(i), vec![], c).unwrap();
        let res = 200;
        let h = 2.0 / res as f64;
        let mut hits = 0;
        for a in 0..res {
            for b in 0..res {
                let p = Point::new(c.x - 1.0 + (a as f64 + 0.5) * h, c.y - 1.0 + (b as f64 + 0.5) * h);
                if hexagon.contains_point(p) && region.contains_point(p) {
                    hits += 1;
                }
            }
        }
        let approx = hits as f64 * h * h;
        assert!((approx - g.rewards[i]).abs() < 0.02, "pixel {i}: {approx} vs {}", g.rewards[i]);
    }
}

#[test]
fn clipped_rewards_match_sampled_areas() {
    for seed in 0..6 {
        let region = random_region(seed, &RegionGenConfig::small());
        let g = build_square_grid(&region).unwrap();
        for i in (0..g.len()).step_by(3) {
            let approx = sampled_area(&region, g.centers[i], 200);
            assert!((approx - g.rewards[i]).abs() < 0.02, "seed {seed} pixel {i}");
        }
    }
}

#[test]
fn rewards_sum_to_region_area() {
    for seed in 0..10 {
        let region = random_region(seed, &RegionGenConfig::small());
        let area = raw_area(&region);
        let g = build_square_grid(&region).unwrap();
        assert!((g.total_reward() - area).abs() <= 1e-9 * area);
        let (h, _) = build_hex_grid(&region).unwrap();
        assert!((h.total_reward() - area).abs() <= 1e-9 * area);
    }
}

#[test]
fn fractional_column_rewards() {
    let region = PolygonalRegion::rectangle(Point::new(0.0, 0.0), Point::new(2.5, 2.0), Point::new(0.5, 0.5)).unwrap();
    let g = build_square_grid(&region).unwrap();
    assert_eq!(g.len(), 6);
    for i in 0..g.len() {
        let expected = sampled_area(&region, g.centers[i], 100);
        assert!((g.rewards[i] - expected).abs() < 1e-9);
    }
}
