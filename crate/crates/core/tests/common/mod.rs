//! Exhaustive reference solvers for tiny instances. Nothing here calls the
//! planners; shortest paths are rebuilt from pixel centers.

#![allow(dead_code)]

use itertools::Itertools;
use mowsearch::{Point, PolygonalRegion};

pub const INF: f64 = f64::INFINITY;

/// Floyd-Warshall over centers, joining pairs at distance 1 (and √2 when
/// `diagonal`).
pub fn grid_distances(centers: &[Point], diagonal: bool) -> Vec<Vec<f64>> {
    let n = centers.len();
    let mut d = vec![vec![INF; n]; n];
    for i in 0..n {
        d[i][i] = 0.0;
        for j in 0..n {
            let e = centers[i].dist(centers[j]);
            if (e - 1.0).abs() < 1e-9 || (diagonal && (e - 2f64.sqrt()).abs() < 1e-9) {
                d[i][j] = e;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

pub fn euclidean(points: &[Point]) -> Vec<Vec<f64>> {
    points.iter().map(|a| points.iter().map(|b| a.dist(*b)).collect()).collect()
}

/// `best[mask]`: shortest closed walk from `start` through every node of
/// `mask` (Held-Karp). Masks without `start` stay infinite.
pub fn held_karp_cycles(d: &[Vec<f64>], start: usize) -> Vec<f64> {
    let n = d.len();
    let full = 1usize << n;
    let mut dp = vec![vec![INF; n]; full];
    dp[1 << start][start] = 0.0;
    for mask in 0..full {
        if mask & (1 << start) == 0 {
            continue;
        }
        for last in 0..n {
            let cur = dp[mask][last];
            if cur == INF {
                continue;
            }
            for v in 0..n {
                if mask & (1 << v) != 0 {
                    continue;
                }
                let next = mask | (1 << v);
                let cand = cur + d[last][v];
                if cand < dp[next][v] {
                    dp[next][v] = cand;
                }
            }
        }
    }
    (0..full)
        .map(|mask| {
            if mask & (1 << start) == 0 {
                INF
            } else if mask == 1 << start {
                0.0
            } else {
                (0..n).map(|l| dp[mask][l] + d[l][start]).fold(INF, f64::min)
            }
        })
        .collect()
}

/// Optimal quota tour length: the cheapest node set containing the start
/// with reward at least `area`, toured optimally.
pub fn optimal_quota_length(d: &[Vec<f64>], rewards: &[f64], start: usize, area: f64) -> Option<f64> {
    let cycles = held_karp_cycles(d, start);
    let mut best = INF;
    for (mask, &len) in cycles.iter().enumerate() {
        let r: f64 = (0..rewards.len()).filter(|v| mask & (1 << v) != 0).map(|v| rewards[v]).sum();
        if r >= area - 1e-9 {
            best = best.min(len);
        }
    }
    (best < INF).then_some(best)
}

/// Same as [`optimal_quota_length`] by enumerating every ordered node
/// sequence from the start.
pub fn brute_quota_length(d: &[Vec<f64>], rewards: &[f64], start: usize, area: f64) -> Option<f64> {
    let n = d.len();
    let others: Vec<usize> = (0..n).filter(|&v| v != start).collect();
    let mut best = if rewards[start] >= area - 1e-9 { 0.0 } else { INF };
    for k in 1..=others.len() {
        for seq in others.iter().copied().permutations(k) {
            let r: f64 = rewards[start] + seq.iter().map(|&v| rewards[v]).sum::<f64>();
            if r < area - 1e-9 {
                continue;
            }
            let mut len = d[start][seq[0]] + d[*seq.last().unwrap()][start];
            for w in seq.windows(2) {
                len += d[w[0]][w[1]];
            }
            best = best.min(len);
        }
    }
    (best < INF).then_some(best)
}

/// Minimum expected detection time over all routes from `start` (pixel
/// model: latency = first arrival at a pixel center). Dynamic program over
/// (visited set, last node) where each move costs its length times the
/// reward still unvisited.
pub fn optimal_latency(d: &[Vec<f64>], rewards: &[f64], start: usize) -> f64 {
    let targets: Vec<usize> = (0..rewards.len()).filter(|&v| v != start && rewards[v] > 0.0).collect();
    let m = targets.len();
    let total: f64 = rewards.iter().sum();
    let full = 1usize << m;
    let weight: Vec<f64> = (0..full)
        .map(|mask| (0..m).filter(|i| mask & (1 << i) != 0).map(|i| rewards[targets[i]]).sum())
        .collect();
    let unvisited_total = total - rewards[start];
    if m == 0 {
        return 0.0;
    }
    // dp[mask][i]: last visited target i
    let mut dp = vec![vec![INF; m]; full];
    for i in 0..m {
        dp[1 << i][i] = d[start][targets[i]] * unvisited_total;
    }
    for mask in 1..full {
        for i in 0..m {
            let cur = dp[mask][i];
            if cur == INF {
                continue;
            }
            let rest = unvisited_total - weight[mask];
            for j in 0..m {
                if mask & (1 << j) != 0 {
                    continue;
                }
                let cand = cur + d[targets[i]][targets[j]] * rest;
                if cand < dp[mask | (1 << j)][j] {
                    dp[mask | (1 << j)][j] = cand;
                }
            }
        }
    }
    dp[full - 1].iter().copied().fold(INF, f64::min) / total
}

/// [`optimal_latency`] by enumerating every visiting order.
pub fn brute_latency(d: &[Vec<f64>], rewards: &[f64], start: usize) -> f64 {
    let targets: Vec<usize> = (0..rewards.len()).filter(|&v| v != start && rewards[v] > 0.0).collect();
    let total: f64 = rewards.iter().sum();
    let mut best = INF;
    for order in targets.iter().copied().permutations(targets.len()) {
        let (mut t, mut acc, mut at) = (0.0, 0.0, start);
        for v in order {
            t += d[at][v];
            acc += rewards[v] * t;
            at = v;
        }
        best = best.min(acc / total);
    }
    best
}

/// Optimal closed tour through all points, fixing point 0.
pub fn brute_cycle(d: &[Vec<f64>]) -> f64 {
    let n = d.len();
    (1..n)
        .permutations(n - 1)
        .map(|p| {
            let mut len = d[0][p[0]] + d[p[n - 2]][0];
            for w in p.windows(2) {
                len += d[w[0]][w[1]];
            }
            len
        })
        .fold(INF, f64::min)
}

/// Optimal open path through all points starting at point 0.
pub fn brute_path(d: &[Vec<f64>]) -> f64 {
    let n = d.len();
    (1..n)
        .permutations(n - 1)
        .map(|p| {
            let mut len = d[0][p[0]];
            for w in p.windows(2) {
                len += d[w[0]][w[1]];
            }
            len
        })
        .fold(INF, f64::min)
}

/// Area of `region ∩ square` by the midpoint rule on a `res × res` lattice.
pub fn sampled_area(region: &PolygonalRegion, center: Point, res: usize) -> f64 {
    let h = 1.0 / res as f64;
    let mut hits = 0usize;
    for i in 0..res {
        for j in 0..res {
            let p = Point::new(center.x - 0.5 + (i as f64 + 0.5) * h, center.y - 0.5 + (j as f64 + 0.5) * h);
            if region.contains_point(p) {
                hits += 1;
            }
        }
    }
    hits as f64 * h * h
}

/// Shoelace area of the outer ring minus the holes, written out directly.
pub fn raw_area(region: &PolygonalRegion) -> f64 {
    fn ring(r: &[Point]) -> f64 {
        let mut s = 0.0;
        for i in 0..r.len() {
            let (a, b) = (r[i], r[(i + 1) % r.len()]);
            s += a.x * b.y - b.x * a.y;
        }
        (s / 2.0).abs()
    }
    ring(region.outer()) - region.holes().iter().map(|h| ring(h)).sum::<f64>()
}

/// First detection by stepping time in increments of `dt` along the polyline.
pub fn stepped_detection(points: &[Point], cumulative: &[f64], target: Point, square: bool, half: f64, dt: f64) -> Option<f64> {
    let inside = |p: Point| {
        let (dx, dy) = (target.x - p.x, target.y - p.y);
        if square {
            dx.abs() <= half && dy.abs() <= half
        } else {
            dx * dx + dy * dy <= half * half
        }
    };
    let end = *cumulative.last().unwrap();
    let steps = (end / dt).ceil() as usize;
    let mut seg = 1;
    for s in 0..=steps {
        let t = (s as f64 * dt).min(end);
        while seg < points.len() - 1 && t > cumulative[seg] {
            seg += 1;
        }
        let p = if points.len() == 1 {
            points[0]
        } else {
            let len = cumulative[seg] - cumulative[seg - 1];
            let f = if len > 0.0 { ((t - cumulative[seg - 1]) / len).clamp(0.0, 1.0) } else { 1.0 };
            let (a, b) = (points[seg - 1], points[seg]);
            Point::new(a.x + f * (b.x - a.x), a.y + f * (b.y - a.y))
        };
        if inside(p) {
            return Some(t);
        }
    }
    None
}
