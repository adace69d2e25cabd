//! Polygons with holes: area, convex clipping, containment and uniform sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance for orientation / collinearity tests.
pub const COLLINEAR_EPS: f64 = 1e-12;

/// Rejection sampling gives up after this many draws.
pub const SAMPLE_ITERATION_CAP: usize = 100_000;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("{ring} ring has {count} vertices, at least 3 are required")]
    TooFewVertices { ring: String, count: usize },
    #[error("non-finite coordinate in {ring} ring")]
    NonFinite { ring: String },
    #[error("{ring} ring is self-intersecting")]
    SelfIntersecting { ring: String },
    #[error("{ring} ring has zero area")]
    Degenerate { ring: String },
    #[error("hole {index} is not strictly inside the outer ring")]
    HoleOutside { index: usize },
    #[error("holes {a} and {b} overlap or touch")]
    HolesOverlap { a: usize, b: usize },
    #[error("start point ({x}, {y}) is not inside the region")]
    StartOutside { x: f64, y: f64 },
    #[error("no sample accepted after {0} draws; region is degenerate")]
    SamplingFailed(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point { x, y }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl std::ops::Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Signed shoelace area; positive for counterclockwise rings.
pub fn signed_area(ring: &[Point]) -> f64 {
    let n = ring.len();
    if n < 3 {
        return 0.0;
    }
    let mut s = 0.0;
    for i in 0..n {
        let a = ring[i];
        let b = ring[(i + 1) % n];
        s += a.x * b.y - b.x * a.y;
    }
    0.5 * s
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub min: Point,
    pub max: Point,
}

impl BoundingBox {
    pub fn of(points: &[Point]) -> Self {
        let mut min = Point::new(f64::INFINITY, f64::INFINITY);
        let mut max = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        BoundingBox { min, max }
    }

    pub fn overlaps(&self, other: &BoundingBox) -> bool {
        self.min.x <= other.max.x
            && other.min.x <= self.max.x
            && self.min.y <= other.max.y
            && other.min.y <= self.max.y
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }
}

/// Closed segment intersection, collinear overlaps included.
fn segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    if ((d1 > COLLINEAR_EPS && d2 < -COLLINEAR_EPS) || (d1 < -COLLINEAR_EPS && d2 > COLLINEAR_EPS))
        && ((d3 > COLLINEAR_EPS && d4 < -COLLINEAR_EPS)
            || (d3 < -COLLINEAR_EPS && d4 > COLLINEAR_EPS))
    {
        return true;
    }
    (d1.abs() <= COLLINEAR_EPS && on_segment(q1, q2, p1))
        || (d2.abs() <= COLLINEAR_EPS && on_segment(q1, q2, p2))
        || (d3.abs() <= COLLINEAR_EPS && on_segment(p1, p2, q1))
        || (d4.abs() <= COLLINEAR_EPS && on_segment(p1, p2, q2))
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) - COLLINEAR_EPS
        && p.x <= a.x.max(b.x) + COLLINEAR_EPS
        && p.y >= a.y.min(b.y) - COLLINEAR_EPS
        && p.y <= a.y.max(b.y) + COLLINEAR_EPS
}

fn point_segment_dist(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.x * ab.x + ab.y * ab.y;
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = (((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2).clamp(0.0, 1.0);
    p.dist(Point::new(a.x + t * ab.x, a.y + t * ab.y))
}

fn ring_is_simple(ring: &[Point]) -> bool {
    let n = ring.len();
    for i in 0..n {
        let (a1, a2) = (ring[i], ring[(i + 1) % n]);
        for j in (i + 1)..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            let (b1, b2) = (ring[j], ring[(j + 1) % n]);
            if adjacent {
                // Only the shared vertex may touch; a fold-back shows up as
                // the two far endpoints lying on the same ray from it.
                let (shared, other_a, other_b) = if j == i + 1 { (a2, a1, b2) } else { (a1, a2, b1) };
                if cross(other_a, shared, other_b).abs() <= COLLINEAR_EPS
                    && ((other_b.x - shared.x) * (other_a.x - shared.x)
                        + (other_b.y - shared.y) * (other_a.y - shared.y))
                        > 0.0
                {
                    return false;
                }
                continue;
            }
            if segments_intersect(a1, a2, b1, b2) {
                return false;
            }
        }
    }
    true
}

fn rings_cross(a: &[Point], b: &[Point]) -> bool {
    for i in 0..a.len() {
        let (a1, a2) = (a[i], a[(i + 1) % a.len()]);
        for j in 0..b.len() {
            if segments_intersect(a1, a2, b[j], b[(j + 1) % b.len()]) {
                return true;
            }
        }
    }
    false
}

/// Even-odd test; result is unspecified for points on the ring itself.
fn inside_ring(ring: &[Point], p: Point) -> bool {
    let n = ring.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (ring[i], ring[j]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

fn on_ring(ring: &[Point], p: Point, tol: f64) -> bool {
    (0..ring.len()).any(|i| point_segment_dist(p, ring[i], ring[(i + 1) % ring.len()]) <= tol)
}

/// Raw region file contents: `{"outer": [[x,y],…], "holes": [[[x,y],…],…], "start": [x,y]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionSpec {
    pub outer: Vec<Point>,
    #[serde(default)]
    pub holes: Vec<Vec<Point>>,
    pub start: Point,
}

/// A polygon with holes and a designated start point.
///
/// Construction validates the ring invariants and normalizes orientation:
/// the outer ring is stored counterclockwise and every hole clockwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RegionSpec", into = "RegionSpec")]
pub struct PolygonalRegion {
    outer: Vec<Point>,
    holes: Vec<Vec<Point>>,
    start: Point,
    bbox: BoundingBox,
    hole_boxes: Vec<BoundingBox>,
}

impl TryFrom<RegionSpec> for PolygonalRegion {
    type Error = GeometryError;
    fn try_from(spec: RegionSpec) -> Result<Self, GeometryError> {
        PolygonalRegion::new(spec.outer, spec.holes, spec.start)
    }
}

impl From<PolygonalRegion> for RegionSpec {
    fn from(r: PolygonalRegion) -> Self {
        RegionSpec {
            outer: r.outer,
            holes: r.holes,
            start: r.start,
        }
    }
}

fn check_ring(ring: &mut Vec<Point>, name: &str) -> Result<(), GeometryError> {
    // a closing vertex equal to the first is allowed in files
    if ring.len() > 3 && ring.first() == ring.last() {
        ring.pop();
    }
    if ring.len() < 3 {
        return Err(GeometryError::TooFewVertices {
            ring: name.to_string(),
            count: ring.len(),
        });
    }
    if !ring.iter().all(|p| p.is_finite()) {
        return Err(GeometryError::NonFinite {
            ring: name.to_string(),
        });
    }
    if !ring_is_simple(ring) {
        return Err(GeometryError::SelfIntersecting {
            ring: name.to_string(),
        });
    }
    if signed_area(ring).abs() <= COLLINEAR_EPS {
        return Err(GeometryError::Degenerate {
            ring: name.to_string(),
        });
    }
    Ok(())
}

impl PolygonalRegion {
    pub fn new(
        mut outer: Vec<Point>,
        mut holes: Vec<Vec<Point>>,
        start: Point,
    ) -> Result<Self, GeometryError> {
        check_ring(&mut outer, "outer")?;
        if signed_area(&outer) < 0.0 {
            outer.reverse();
        }
        for (i, hole) in holes.iter_mut().enumerate() {
            check_ring(hole, &format!("hole {i}"))?;
            if signed_area(hole) > 0.0 {
                hole.reverse();
            }
            let strictly_inside = hole.iter().all(|&p| {
                inside_ring(&outer, p) && !on_ring(&outer, p, COLLINEAR_EPS)
            });
            if !strictly_inside || rings_cross(hole, &outer) {
                return Err(GeometryError::HoleOutside { index: i });
            }
        }
        for a in 0..holes.len() {
            for b in (a + 1)..holes.len() {
                let nested = inside_ring(&holes[a], holes[b][0]) || inside_ring(&holes[b], holes[a][0]);
                if nested || rings_cross(&holes[a], &holes[b]) {
                    return Err(GeometryError::HolesOverlap { a, b });
                }
            }
        }
        if !start.is_finite() {
            return Err(GeometryError::StartOutside {
                x: start.x,
                y: start.y,
            });
        }
        let bbox = BoundingBox::of(&outer);
        let hole_boxes = holes.iter().map(|h| BoundingBox::of(h)).collect();
        let region = PolygonalRegion {
            outer,
            holes,
            start,
            bbox,
            hole_boxes,
        };
        if !region.contains_point(start) {
            return Err(GeometryError::StartOutside {
                x: start.x,
                y: start.y,
            });
        }
        Ok(region)
    }

    /// Axis-aligned rectangle without holes.
    pub fn rectangle(min: Point, max: Point, start: Point) -> Result<Self, GeometryError> {
        PolygonalRegion::new(
            vec![min, Point::new(max.x, min.y), max, Point::new(min.x, max.y)],
            Vec::new(),
            start,
        )
    }

    pub fn outer(&self) -> &[Point] {
        &self.outer
    }

    pub fn holes(&self) -> &[Vec<Point>] {
        &self.holes
    }

    pub fn start(&self) -> Point {
        self.start
    }

    pub fn bbox(&self) -> BoundingBox {
        self.bbox
    }

    /// Total vertex count over all rings.
    pub fn vertex_count(&self) -> usize {
        self.outer.len() + self.holes.iter().map(Vec::len).sum::<usize>()
    }

    /// Copy of this region with one hole removed.
    pub fn without_hole(&self, index: usize) -> Self {
        let mut holes = self.holes.clone();
        holes.remove(index);
        let hole_boxes = holes.iter().map(|h| BoundingBox::of(h)).collect();
        PolygonalRegion {
            outer: self.outer.clone(),
            holes,
            start: self.start,
            bbox: self.bbox,
            hole_boxes,
        }
    }

    /// |R|: outer area minus the hole areas.
    pub fn area(&self) -> f64 {
        signed_area(&self.outer) + self.holes.iter().map(|h| signed_area(h)).sum::<f64>()
    }

    /// Closed-region membership: boundary points count as inside.
    pub fn contains_point(&self, p: Point) -> bool {
        if p.x < self.bbox.min.x - COLLINEAR_EPS
            || p.x > self.bbox.max.x + COLLINEAR_EPS
            || p.y < self.bbox.min.y - COLLINEAR_EPS
            || p.y > self.bbox.max.y + COLLINEAR_EPS
        {
            return false;
        }
        if on_ring(&self.outer, p, COLLINEAR_EPS) {
            return true;
        }
        if !inside_ring(&self.outer, p) {
            return false;
        }
        for (hole, hb) in self.holes.iter().zip(&self.hole_boxes) {
            if p.x < hb.min.x || p.x > hb.max.x || p.y < hb.min.y || p.y > hb.max.y {
                continue;
            }
            if on_ring(hole, p, COLLINEAR_EPS) {
                return true;
            }
            if inside_ring(hole, p) {
                return false;
            }
        }
        true
    }

    /// Area of `pixel ∩ R` for a convex pixel polygon.
    pub fn clip_area(&self, pixel: &[Point]) -> f64 {
        let pb = BoundingBox::of(pixel);
        if !pb.overlaps(&self.bbox) {
            return 0.0;
        }
        let mut area = convex_clip_area(&self.outer, pixel);
        if area <= 0.0 {
            return 0.0;
        }
        for (hole, hb) in self.holes.iter().zip(&self.hole_boxes) {
            if hb.overlaps(&pb) {
                area -= convex_clip_area(hole, pixel);
            }
        }
        let cap = signed_area(pixel).abs();
        area.clamp(0.0, cap)
    }

    /// Uniform point in R by rejection sampling in the bounding box.
    pub fn sample_uniform(&self, seed: u64) -> Result<Point, GeometryError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample_with(&mut rng)
    }

    pub fn sample_with<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Point, GeometryError> {
        let BoundingBox { min, max } = self.bbox;
        for _ in 0..SAMPLE_ITERATION_CAP {
            let p = Point::new(rng.gen_range(min.x..=max.x), rng.gen_range(min.y..=max.y));
            if self.contains_point(p) {
                return Ok(p);
            }
        }
        Err(GeometryError::SamplingFailed(SAMPLE_ITERATION_CAP))
    }
}

/// |R|.
pub fn region_area(region: &PolygonalRegion) -> f64 {
    region.area()
}

/// r(p) = |pixel ∩ R|.
pub fn clip_pixel(region: &PolygonalRegion, pixel: &[Point]) -> f64 {
    region.clip_area(pixel)
}

pub fn contains_point(region: &PolygonalRegion, x: Point) -> bool {
    region.contains_point(x)
}

pub fn sample_uniform(region: &PolygonalRegion, seed: u64) -> Result<Point, GeometryError> {
    region.sample_uniform(seed)
}

/// Area of `ring ∩ clip` where `clip` is convex; `ring` may be non-convex.
///
/// Sutherland–Hodgman against each clip edge. The output may contain
/// zero-width slivers along clip edges, which contribute nothing to the
/// shoelace sum.
pub fn convex_clip_area(ring: &[Point], clip: &[Point]) -> f64 {
    let ccw = signed_area(clip) >= 0.0;
    let mut current: Vec<Point> = ring.to_vec();
    let mut next: Vec<Point> = Vec::with_capacity(ring.len() + clip.len());
    let m = clip.len();
    for e in 0..m {
        if current.is_empty() {
            return 0.0;
        }
        let (a, b) = if ccw {
            (clip[e], clip[(e + 1) % m])
        } else {
            (clip[(e + 1) % m], clip[e])
        };
        next.clear();
        let side = |p: Point| cross(a, b, p);
        let n = current.len();
        for i in 0..n {
            let cur = current[i];
            let prev = current[(i + n - 1) % n];
            let sc = side(cur);
            let sp = side(prev);
            let cur_in = sc >= -COLLINEAR_EPS;
            let prev_in = sp >= -COLLINEAR_EPS;
            if cur_in {
                if !prev_in {
                    next.push(intersect(prev, cur, sp, sc));
                }
                next.push(cur);
            } else if prev_in {
                next.push(intersect(prev, cur, sp, sc));
            }
        }
        std::mem::swap(&mut current, &mut next);
    }
    signed_area(&current).abs()
}

fn intersect(p: Point, q: Point, sp: f64, sq: f64) -> Point {
    let t = sp / (sp - sq);
    Point::new(p.x + t * (q.x - p.x), p.y + t * (q.y - p.y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(x0: f64, y0: f64, x1: f64, y1: f64) -> Vec<Point> {
        vec![
            Point::new(x0, y0),
            Point::new(x1, y0),
            Point::new(x1, y1),
            Point::new(x0, y1),
        ]
    }

    fn unit_square() -> PolygonalRegion {
        PolygonalRegion::new(sq(0.0, 0.0, 1.0, 1.0), vec![], Point::new(0.5, 0.5)).unwrap()
    }

    fn holed() -> PolygonalRegion {
        PolygonalRegion::new(
            sq(0.0, 0.0, 4.0, 4.0),
            vec![sq(1.0, 1.0, 3.0, 3.0)],
            Point::new(0.5, 0.5),
        )
        .unwrap()
    }

    #[test]
    fn areas() {
        assert!((unit_square().area() - 1.0).abs() < 1e-12);
        assert!((holed().area() - 12.0).abs() < 1e-12);
        let tri = PolygonalRegion::new(
            vec![Point::new(0.0, 0.0), Point::new(4.0, 0.0), Point::new(0.0, 3.0)],
            vec![],
            Point::new(0.5, 0.5),
        )
        .unwrap();
        assert!((region_area(&tri) - 6.0).abs() < 1e-12);
    }

    #[test]
    fn orientation_is_normalized() {
        let mut outer = sq(0.0, 0.0, 4.0, 4.0);
        outer.reverse();
        let r = PolygonalRegion::new(outer, vec![sq(1.0, 1.0, 2.0, 2.0)], Point::new(3.0, 3.0))
            .unwrap();
        assert!(signed_area(r.outer()) > 0.0);
        assert!(signed_area(&r.holes()[0]) < 0.0);
        assert!((r.area() - 15.0).abs() < 1e-12);
    }

    #[test]
    fn removing_a_hole_adds_its_area() {
        let r = holed();
        let hole_area = signed_area(&r.holes()[0]).abs();
        assert!((r.without_hole(0).area() - r.area() - hole_area).abs() < 1e-12);
    }

    #[test]
    fn clip_examples() {
        let big = PolygonalRegion::rectangle(Point::new(0.0, 0.0), Point::new(10.0, 10.0), Point::new(5.0, 5.0)).unwrap();
        assert!((clip_pixel(&big, &sq(3.0, 3.0, 4.0, 4.0)) - 1.0).abs() < 1e-12);

        let half = PolygonalRegion::rectangle(Point::new(-5.0, -5.0), Point::new(0.5, 5.0), Point::new(0.0, 0.0)).unwrap();
        assert!((clip_pixel(&half, &sq(0.0, 0.0, 1.0, 1.0)) - 0.5).abs() < 1e-12);

        let tri = PolygonalRegion::new(
            vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)],
            vec![],
            Point::new(0.2, 0.2),
        )
        .unwrap();
        assert!((clip_pixel(&tri, &sq(0.0, 0.0, 1.0, 1.0)) - 0.5).abs() < 1e-12);

        assert_eq!(clip_pixel(&big, &sq(20.0, 20.0, 21.0, 21.0)), 0.0);
        // pixel over the hole corner of the 4×4 region: 3/4 of it lies in R
        let r = holed();
        assert!((clip_pixel(&r, &sq(0.5, 0.5, 1.5, 1.5)) - 0.75).abs() < 1e-12);
    }

    #[test]
    fn clip_nonconvex_subject() {
        // L-shaped region, pixel straddling the notch
        let l = PolygonalRegion::new(
            vec![
                Point::new(0.0, 0.0),
                Point::new(2.0, 0.0),
                Point::new(2.0, 1.0),
                Point::new(1.0, 1.0),
                Point::new(1.0, 2.0),
                Point::new(0.0, 2.0),
            ],
            vec![],
            Point::new(0.5, 0.5),
        )
        .unwrap();
        assert!((clip_pixel(&l, &sq(0.5, 0.5, 1.5, 1.5)) - 0.75).abs() < 1e-12);
    }

    #[test]
    fn containment() {
        let u = unit_square();
        assert!(contains_point(&u, Point::new(0.5, 0.5)));
        assert!(contains_point(&u, Point::new(1.0, 0.3)));
        assert!(contains_point(&u, Point::new(0.0, 0.0)));
        assert!(!contains_point(&u, Point::new(1.1, 0.3)));
        let h = holed();
        assert!(!contains_point(&h, Point::new(2.0, 2.0)));
        assert!(contains_point(&h, Point::new(1.0, 2.0)));
        assert!(contains_point(&h, Point::new(0.5, 2.0)));
    }

    #[test]
    fn validation_errors() {
        let bow = vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
        ];
        assert!(matches!(
            PolygonalRegion::new(bow, vec![], Point::new(0.5, 0.2)),
            Err(GeometryError::SelfIntersecting { .. })
        ));
        assert!(matches!(
            PolygonalRegion::new(sq(0.0, 0.0, 1.0, 1.0), vec![], Point::new(3.0, 3.0)),
            Err(GeometryError::StartOutside { .. })
        ));
        assert!(matches!(
            PolygonalRegion::new(
                sq(0.0, 0.0, 4.0, 4.0),
                vec![sq(3.0, 3.0, 5.0, 5.0)],
                Point::new(0.5, 0.5)
            ),
            Err(GeometryError::HoleOutside { index: 0 })
        ));
        assert!(matches!(
            PolygonalRegion::new(
                sq(0.0, 0.0, 6.0, 6.0),
                vec![sq(1.0, 1.0, 3.0, 3.0), sq(2.0, 2.0, 4.0, 4.0)],
                Point::new(0.5, 0.5)
            ),
            Err(GeometryError::HolesOverlap { a: 0, b: 1 })
        ));
        assert!(matches!(
            PolygonalRegion::new(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0)], vec![], Point::new(0.0, 0.0)),
            Err(GeometryError::TooFewVertices { .. })
        ));
        // start inside a hole
        assert!(matches!(
            PolygonalRegion::new(sq(0.0, 0.0, 4.0, 4.0), vec![sq(1.0, 1.0, 3.0, 3.0)], Point::new(2.0, 2.0)),
            Err(GeometryError::StartOutside { .. })
        ));
    }

    #[test]
    fn sampling_is_deterministic_and_contained() {
        let u = unit_square();
        for seed in 0..50 {
            let p = sample_uniform(&u, seed).unwrap();
            assert!((0.0..=1.0).contains(&p.x) && (0.0..=1.0).contains(&p.y));
            assert_eq!(p, sample_uniform(&u, seed).unwrap());
        }
    }

    #[test]
    fn sampling_is_uniform_across_halves() {
        let r = PolygonalRegion::rectangle(Point::new(0.0, 0.0), Point::new(2.0, 1.0), Point::new(0.5, 0.5)).unwrap();
        let n = 100_000u64;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let left = (0..n)
            .filter(|_| r.sample_with(&mut rng).unwrap().x < 1.0)
            .count();
        // 4.5 sigma of a fair binomial is ~0.0071
        assert!((left as f64 / n as f64 - 0.5).abs() < 0.01);
    }

    #[test]
    fn region_json_round_trip() {
        let json = r#"{"outer": [[0,0],[4,0],[4,4],[0,4]], "holes": [[[1,1],[1,3],[3,3],[3,1]]], "start": [0.5,0.5]}"#;
        let r: PolygonalRegion = serde_json::from_str(json).unwrap();
        assert!((r.area() - 12.0).abs() < 1e-12);
        let back: PolygonalRegion = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(r, back);
    }

    #[test]
    fn malformed_region_json_is_rejected() {
        let bad = r#"{"outer": [[0,0],[1,0]], "start": [0,0]}"#;
        assert!(serde_json::from_str::<PolygonalRegion>(bad).is_err());
    }
}
