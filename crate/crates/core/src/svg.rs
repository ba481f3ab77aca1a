//! SVG figures: polygon, side disks, medial axis, an independent set and the
//! decomposition tree.

use std::fmt::Write;

use crate::decomposition::TreeDecomposition;
use crate::geometry::{ConvexPolygon, Point};
use crate::medial_axis::MedialAxis;

/// Optional layers drawn on top of the polygon.
#[derive(Debug, Clone, Copy, Default)]
pub struct Layers<'a> {
    pub disks: bool,
    pub medial_axis: Option<&'a MedialAxis>,
    /// Sides whose disks are highlighted.
    pub mis_witness: Option<&'a [usize]>,
    pub decomposition: Option<&'a TreeDecomposition>,
}

const WIDTH_PX: f64 = 800.0;

/// Standalone SVG 1.1 document. The view box covers the polygon and all
/// side disks with a 5% margin; the y axis points up.
pub fn render_svg(p: &ConvexPolygon, layers: &Layers) -> String {
    let (mut lo, mut hi) = (
        Point::new(f64::INFINITY, f64::INFINITY),
        Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
    );
    let mut grow = |c: Point, r: f64| {
        lo = Point::new(lo.x.min(c.x - r), lo.y.min(c.y - r));
        hi = Point::new(hi.x.max(c.x + r), hi.y.max(c.y + r));
    };
    for &v in p.vertices() {
        grow(v, 0.0);
    }
    for i in 0..p.n() {
        let d = p.side_disk(i);
        grow(d.center, d.radius);
    }
    let span = (hi.x - lo.x).max(hi.y - lo.y).max(f64::MIN_POSITIVE);
    let pad = 0.05 * span;
    let (x0, y0) = (lo.x - pad, -(hi.y + pad));
    let (w, h) = (hi.x - lo.x + 2.0 * pad, hi.y - lo.y + 2.0 * pad);
    let stroke = 0.003 * span;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH_PX}" height="{}" viewBox="{x0} {y0} {w} {h}">"#,
        (WIDTH_PX * h / w).round()
    );
    let _ = writeln!(s, r#"<g transform="scale(1,-1)" stroke-width="{stroke}">"#);

    if layers.disks || layers.mis_witness.is_some() {
        let chosen = layers.mis_witness.unwrap_or(&[]);
        for i in 0..p.n() {
            let d = p.side_disk(i);
            let hit = chosen.contains(&i);
            if !layers.disks && !hit {
                continue;
            }
            let (class, fill) = if hit {
                ("disk mis", "#e4572e")
            } else {
                ("disk", "#4c72b0")
            };
            let _ = writeln!(
                s,
                r#"<circle class="{class}" data-side="{i}" cx="{}" cy="{}" r="{}" fill="{fill}" fill-opacity="0.15" stroke="{fill}"/>"#,
                d.center.x, d.center.y, d.radius
            );
        }
    }

    let mut path = String::new();
    for (k, v) in p.vertices().iter().enumerate() {
        let _ = write!(path, "{}{} {} ", if k == 0 { "M" } else { "L" }, v.x, v.y);
    }
    path.push('Z');
    let _ = writeln!(s, r#"<path class="polygon" d="{path}" fill="none" stroke="black"/>"#);

    if let Some(axis) = layers.medial_axis {
        for e in axis.edges() {
            let (a, b) = (axis.vertex(e.a).center, axis.vertex(e.b).center);
            let _ = writeln!(
                s,
                r##"<line class="axis" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#55a868"/>"##,
                a.x, a.y, b.x, b.y
            );
        }
    }

    if let Some(td) = layers.decomposition {
        // Each bag sits at the mean of the midpoints of its sides.
        let at: Vec<Point> = td
            .bags()
            .iter()
            .map(|b| {
                let k = b.sides.len().max(1) as f64;
                b.sides
                    .iter()
                    .fold(Point::new(0.0, 0.0), |acc, &i| acc + p.side(i % p.n()).midpoint())
                    * (1.0 / k)
            })
            .collect();
        for b in td.bags() {
            if let Some(par) = b.parent {
                let (u, v) = (at[b.id], at[par]);
                let _ = writeln!(
                    s,
                    r##"<line class="tree-edge" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#8172b2"/>"##,
                    u.x, u.y, v.x, v.y
                );
            }
        }
        for b in td.bags() {
            let c = at[b.id];
            let _ = writeln!(
                s,
                r##"<circle class="bag" data-sides="{:?}" cx="{}" cy="{}" r="{}" fill="#8172b2"/>"##,
                b.sides,
                c.x,
                c.y,
                4.0 * stroke
            );
        }
    }

    s.push_str("</g>\n</svg>\n");
    s
}
