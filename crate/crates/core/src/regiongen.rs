//! Seeded random test regions: column-convex rectilinear polygons with
//! rectangular holes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{Point, PolygonalRegion};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionGenConfig {
    /// Inclusive range for the number of unit columns.
    pub columns: (u32, u32),
    /// Inclusive range for column heights.
    pub heights: (u32, u32),
    /// Inclusive range for the number of holes.
    pub holes: (u32, u32),
    /// Inclusive range for hole side lengths in columns.
    pub hole_size: (u32, u32),
    /// Uniform scale range applied to the lattice polygon.
    pub scale: (f64, f64),
}

impl RegionGenConfig {
    /// Roughly 100 to 600 pixels, up to four holes.
    pub fn benchmark() -> Self {
        RegionGenConfig {
            columns: (10, 18),
            heights: (8, 18),
            holes: (1, 4),
            hole_size: (1, 3),
            scale: (1.0, 1.25),
        }
    }

    /// A handful of pixels and no holes.
    pub fn tiny() -> Self {
        RegionGenConfig {
            columns: (1, 4),
            heights: (1, 3),
            holes: (0, 0),
            hole_size: (1, 1),
            scale: (1.0, 1.0),
        }
    }

    /// Mid-sized regions with at most one hole.
    pub fn small() -> Self {
        RegionGenConfig {
            columns: (3, 7),
            heights: (2, 6),
            holes: (0, 1),
            hole_size: (1, 1),
            scale: (0.8, 1.4),
        }
    }
}

/// Drops repeated points and the middle vertex of collinear triples.
fn simplify(ring: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    let mut pts: Vec<(i64, i64)> = Vec::with_capacity(ring.len());
    for p in ring {
        if pts.last() != Some(&p) {
            pts.push(p);
        }
    }
    if pts.len() > 1 && pts.first() == pts.last() {
        pts.pop();
    }
    loop {
        let n = pts.len();
        let mut removed = false;
        for i in 0..n {
            let (a, b, c) = (pts[(i + n - 1) % n], pts[i], pts[(i + 1) % n]);
            let cross = (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0);
            if cross == 0 {
                pts.remove(i);
                removed = true;
                break;
            }
        }
        if !removed {
            return pts;
        }
    }
}

/// Random column intervals `[lo, hi)` where neighbors overlap by at least one unit.
fn columns<R: Rng>(rng: &mut R, cfg: &RegionGenConfig) -> Vec<(i64, i64)> {
    let w = rng.gen_range(cfg.columns.0..=cfg.columns.1) as usize;
    let mut cols: Vec<(i64, i64)> = Vec::with_capacity(w);
    for _ in 0..w {
        let h = rng.gen_range(cfg.heights.0..=cfg.heights.1) as i64;
        let lo = match cols.last() {
            None => 0,
            // keep at least one unit of overlap with the previous column
            Some(&(plo, phi)) => rng.gen_range(plo - h + 1..=phi - 1),
        };
        cols.push((lo, lo + h));
    }
    cols
}

fn outline(cols: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut ring = Vec::new();
    for (c, &(lo, _)) in cols.iter().enumerate() {
        ring.push((c as i64, lo));
        ring.push((c as i64 + 1, lo));
    }
    for (c, &(_, hi)) in cols.iter().enumerate().rev() {
        ring.push((c as i64 + 1, hi));
        ring.push((c as i64, hi));
    }
    simplify(ring)
}

/// Square lattice holes that keep one unit of margin to the boundary and to each other.
fn holes<R: Rng>(rng: &mut R, cols: &[(i64, i64)], cfg: &RegionGenConfig) -> Vec<(i64, i64, i64)> {
    let want = rng.gen_range(cfg.holes.0..=cfg.holes.1);
    let mut placed: Vec<(i64, i64, i64)> = Vec::new();
    let w = cols.len() as i64;
    for _ in 0..want {
        for _attempt in 0..50 {
            let s = rng.gen_range(cfg.hole_size.0..=cfg.hole_size.1) as i64;
            if w < s + 2 {
                break;
            }
            let x = rng.gen_range(1..=w - s - 1);
            // the hole's columns plus one margin column on each side
            let span = &cols[(x - 1) as usize..(x + s + 1) as usize];
            let lo = span.iter().map(|c| c.0).max().unwrap() + 1;
            let hi = span.iter().map(|c| c.1).min().unwrap() - 1;
            if hi - lo < s {
                continue;
            }
            let y = rng.gen_range(lo..=hi - s);
            let clear = placed
                .iter()
                .all(|&(px, py, ps)| x + s < px || px + ps < x || y + s < py || py + ps < y);
            if clear {
                placed.push((x, y, s));
                break;
            }
        }
    }
    placed
}

/// Deterministic random region for `seed`. The start is a uniform point of R.
pub fn random_region(seed: u64, cfg: &RegionGenConfig) -> PolygonalRegion {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let cols = columns(&mut rng, cfg);
        let scale = if cfg.scale.0 < cfg.scale.1 {
            rng.gen_range(cfg.scale.0..cfg.scale.1)
        } else {
            cfg.scale.0
        };
        let shift = Point::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let map = |(x, y): (i64, i64)| Point::new(x as f64 * scale + shift.x, y as f64 * scale + shift.y);
        let outer: Vec<Point> = outline(&cols).into_iter().map(map).collect();
        let hole_rings: Vec<Vec<Point>> = holes(&mut rng, &cols, cfg)
            .into_iter()
            .map(|(x, y, s)| [(x, y), (x, y + s), (x + s, y + s), (x + s, y)].into_iter().map(map).collect())
            .collect();
        // provisional start for validation, replaced by a sampled one below
        let probe = map((0, cols[0].0));
        let Ok(draft) = PolygonalRegion::new(outer.clone(), hole_rings.clone(), probe) else {
            continue;
        };
        let Ok(start) = draft.sample_with(&mut rng) else {
            continue;
        };
        if let Ok(region) = PolygonalRegion::new(outer, hole_rings, start) {
            return region;
        }
    }
}

/// Random region whose start sits on a unit lattice point offset by one half,
/// so pixels align with the lattice cells (integral rewards when unscaled).
pub fn random_lattice_region(seed: u64, cfg: &RegionGenConfig) -> PolygonalRegion {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let cols = columns(&mut rng, cfg);
        let map = |(x, y): (i64, i64)| Point::new(x as f64, y as f64);
        let outer: Vec<Point> = outline(&cols).into_iter().map(map).collect();
        let hole_rings: Vec<Vec<Point>> = holes(&mut rng, &cols, cfg)
            .into_iter()
            .map(|(x, y, s)| [(x, y), (x, y + s), (x + s, y + s), (x + s, y)].into_iter().map(map).collect())
            .collect();
        let c = rng.gen_range(0..cols.len());
        let (lo, hi) = cols[c];
        let start = Point::new(c as f64 + 0.5, rng.gen_range(lo..hi) as f64 + 0.5);
        if let Ok(region) = PolygonalRegion::new(outer, hole_rings, start) {
            return region;
        }
    }
}
