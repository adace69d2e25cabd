//! SVG drawings of regions, pixel grids and routes.

use std::fmt::Write;

use crate::discretize::PixelGrid;
use crate::geometry::{Point, PolygonalRegion};
use crate::tours::Route;

/// Stroke colors cycled over route legs.
pub const LEG_COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

#[derive(Debug, Clone, Default)]
pub struct Scene<'a> {
    pub grid: Option<&'a PixelGrid>,
    pub route: Option<&'a Route>,
    pub target: Option<Point>,
    /// Output width in px; height follows the aspect ratio.
    pub width: Option<f64>,
}

fn ring_path(ring: &[Point], out: &mut String) {
    for (k, p) in ring.iter().enumerate() {
        let _ = write!(out, "{}{:.4},{:.4} ", if k == 0 { "M" } else { "L" }, p.x, -p.y);
    }
    out.push('Z');
}

/// Splits waypoint positions into leg ranges; an unmarked route is one leg.
fn leg_ranges(route: &Route) -> Vec<(usize, usize)> {
    let last = route.waypoints.len() - 1;
    let mut starts: Vec<usize> = route.legs.iter().copied().filter(|&s| s < last).collect();
    if starts.first() != Some(&0) {
        starts.insert(0, 0);
    }
    starts.dedup();
    starts
        .iter()
        .enumerate()
        .map(|(i, &s)| (s, starts.get(i + 1).copied().unwrap_or(last)))
        .filter(|(s, e)| e > s)
        .collect()
}

/// Renders the region (outer ring, holes) and whatever else the scene holds.
pub fn render_svg(region: &PolygonalRegion, scene: &Scene) -> String {
    let mut bb = region.bbox();
    if let Some(g) = scene.grid {
        for &c in &g.centers {
            bb.min.x = bb.min.x.min(c.x - 1.0);
            bb.min.y = bb.min.y.min(c.y - 1.0);
            bb.max.x = bb.max.x.max(c.x + 1.0);
            bb.max.y = bb.max.y.max(c.y + 1.0);
        }
    }
    let pad = 0.5;
    let (w, h) = (bb.width() + 2.0 * pad, bb.height() + 2.0 * pad);
    let px_w = scene.width.unwrap_or(640.0);
    let px_h = px_w * h / w;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{px_w:.0}" height="{px_h:.0}" viewBox="{:.4} {:.4} {w:.4} {h:.4}">"#,
        bb.min.x - pad,
        -bb.max.y - pad,
    );
    let stroke = (w.max(h) / 400.0).max(0.02);

    let mut d = String::new();
    ring_path(region.outer(), &mut d);
    for hole in region.holes() {
        d.push(' ');
        ring_path(hole, &mut d);
    }
    let _ = writeln!(
        s,
        r##"<path class="region" d="{d}" fill="#f3f1e7" fill-rule="evenodd" stroke="#333" stroke-width="{:.4}"/>"##,
        stroke * 2.0
    );

    if let Some(g) = scene.grid {
        let _ = writeln!(s, r##"<g class="pixels" fill="none" stroke="#bbb" stroke-width="{stroke:.4}">"##);
        for i in 0..g.len() {
            let mut d = String::new();
            ring_path(&g.pixel_polygon(i), &mut d);
            let _ = writeln!(s, r#"<path d="{d}"/>"#);
        }
        let _ = writeln!(s, "</g>");
    }

    if let (Some(route), Some(g)) = (scene.route, scene.grid) {
        if route.waypoints.len() > 1 {
            for (leg, (a, b)) in leg_ranges(route).into_iter().enumerate() {
                let pts: Vec<String> = route.waypoints[a..=b]
                    .iter()
                    .map(|&v| format!("{:.4},{:.4}", g.centers[v].x, -g.centers[v].y))
                    .collect();
                let _ = writeln!(
                    s,
                    r#"<polyline class="leg" data-leg="{leg}" points="{}" fill="none" stroke="{}" stroke-width="{:.4}" stroke-linejoin="round"/>"#,
                    pts.join(" "),
                    LEG_COLORS[leg % LEG_COLORS.len()],
                    stroke * 3.0
                );
            }
        }
    }

    let st = region.start();
    let _ = writeln!(
        s,
        r##"<circle class="start" cx="{:.4}" cy="{:.4}" r="{:.4}" fill="#000"/>"##,
        st.x,
        -st.y,
        stroke * 6.0
    );
    if let Some(t) = scene.target {
        let r = stroke * 6.0;
        let _ = writeln!(
            s,
            r##"<path class="target" d="M{:.4},{:.4} L{:.4},{:.4} M{:.4},{:.4} L{:.4},{:.4}" stroke="#c00" stroke-width="{:.4}"/>"##,
            t.x - r,
            -t.y - r,
            t.x + r,
            -t.y + r,
            t.x - r,
            -t.y + r,
            t.x + r,
            -t.y - r,
            stroke * 2.0
        );
    }
    s.push_str("</svg>\n");
    s
}
