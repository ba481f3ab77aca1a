//! Planar primitives and the disk/polygon predicates used everywhere else.
//!
//! All comparisons go through [`Tolerance`], a relative tolerance that is
//! scaled by the largest magnitude taking part in each comparison.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default relative tolerance.
pub const DEFAULT_EPS: f64 = 1e-9;

/// Lengths at or below this multiple of the coordinate magnitude cannot be
/// told apart from zero in double precision.
const DEGENERATE_ULPS: f64 = 16.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    pub fn midpoint(self, o: Point) -> Point {
        Point::new(0.5 * (self.x + o.x), 0.5 * (self.y + o.y))
    }

    /// Counter-clockwise quarter turn.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Point {
        let n = self.norm();
        Point::new(self.x / n, self.y / n)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn lerp(self, o: Point, t: f64) -> Point {
        self + (o - self) * t
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point::new(x, y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    pub fn midpoint(&self) -> Point {
        self.a.midpoint(self.b)
    }

    pub fn direction(&self) -> Point {
        (self.b - self.a).normalized()
    }

    pub fn line(&self) -> Line {
        Line {
            point: self.a,
            direction: self.direction(),
        }
    }

    fn is_degenerate(&self) -> bool {
        let scale = self.a.norm().max(self.b.norm()).max(f64::MIN_POSITIVE);
        let len = self.length();
        len.is_nan() || len <= DEGENERATE_ULPS * scale
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub point: Point,
    /// Unit vector.
    pub direction: Point,
}

impl Line {
    /// Signed distance, positive on the left of `direction`.
    pub fn signed_distance(&self, p: Point) -> f64 {
        self.direction.cross(p - self.point)
    }

    pub fn normal(&self) -> Point {
        self.direction.perp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Point,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Point, radius: f64) -> Self {
        Disk { center, radius }
    }

    /// `r1 + r2 - dist`: positive when the interiors overlap.
    pub fn overlap_depth(&self, other: &Disk) -> f64 {
        self.radius + other.radius - self.center.dist(other.center)
    }

    pub fn contains(&self, p: Point, tol: Tolerance) -> bool {
        self.center.dist(p) <= self.radius * (1.0 + tol.eps)
    }
}

/// Relative geometric tolerance, `0 < eps < 1e-3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub eps: f64,
}

impl Tolerance {
    pub fn new(eps: f64) -> Result<Self> {
        if eps > 0.0 && eps < 1e-3 {
            Ok(Tolerance { eps })
        } else {
            Err(Error::PreconditionFailed(format!(
                "tolerance must lie in (0, 1e-3), got {eps}"
            )))
        }
    }

    /// Reads `SIDEDISK_EPS`, falling back to the default when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var("SIDEDISK_EPS") {
            Ok(s) => {
                let eps = s
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| Error::PreconditionFailed(format!("SIDEDISK_EPS is not a number: {s:?}")))?;
                Tolerance::new(eps)
            }
            Err(_) => Ok(Tolerance::default()),
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eps: DEFAULT_EPS }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IntersectionMode {
    /// Disks meet when they share any point; tangent pairs intersect.
    #[default]
    Closed,
    /// Disks meet only when their interiors overlap.
    Open,
}

impl std::str::FromStr for IntersectionMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed" => Ok(IntersectionMode::Closed),
            "open" => Ok(IntersectionMode::Open),
            other => Err(Error::PreconditionFailed(format!("unknown mode {other:?}"))),
        }
    }
}

/// The disk having `s` as a diameter.
pub fn disk_from_segment(s: Segment) -> Result<Disk> {
    if s.is_degenerate() || !s.a.is_finite() || !s.b.is_finite() {
        return Err(Error::DegenerateInput(format!(
            "segment {:?}-{:?} has no length",
            s.a, s.b
        )));
    }
    Ok(Disk::new(s.midpoint(), 0.5 * s.length()))
}

pub fn disks_intersect(d1: &Disk, d2: &Disk, mode: IntersectionMode, tol: Tolerance) -> bool {
    let dist = d1.center.dist(d2.center);
    let sum = d1.radius + d2.radius;
    // Relative to the smaller disk, plus the rounding error of `dist`.
    let magnitude = d1.center.norm().max(d2.center.norm()) + d1.radius.max(d2.radius);
    let slack = tol.eps * d1.radius.min(d2.radius) + 8.0 * f64::EPSILON * magnitude;
    match mode {
        IntersectionMode::Closed => dist <= sum + slack,
        IntersectionMode::Open => dist < sum - slack,
    }
}

/// A strictly convex polygon with counter-clockwise vertices. Side `i` runs
/// from vertex `i` to vertex `i + 1 (mod n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

impl ConvexPolygon {
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.vertices[i % self.vertices.len()]
    }

    pub fn side(&self, i: usize) -> Segment {
        let n = self.n();
        Segment::new(self.vertices[i % n], self.vertices[(i + 1) % n])
    }

    pub fn sides(&self) -> impl Iterator<Item = Segment> + '_ {
        (0..self.n()).map(move |i| self.side(i))
    }

    /// Inward unit normal of side `i` and the offset `c` such that the
    /// signed distance of `p` to the side line is `normal . p - c`.
    pub fn side_halfplane(&self, i: usize) -> (Point, f64) {
        let s = self.side(i);
        let normal = s.direction().perp();
        (normal, normal.dot(s.a))
    }

    pub fn side_disk(&self, i: usize) -> Disk {
        let s = self.side(i);
        Disk::new(s.midpoint(), 0.5 * s.length())
    }

    /// Largest coordinate-box extent; used to scale absolute tolerances.
    pub fn diameter(&self) -> f64 {
        let (mut lo, mut hi) = (self.vertices[0], self.vertices[0]);
        for p in &self.vertices {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        (hi - lo).norm()
    }

    pub fn centroid(&self) -> Point {
        let n = self.n() as f64;
        let s = self.vertices.iter().fold(Point::default(), |acc, &p| acc + p);
        s * (1.0 / n)
    }

    /// Polygon whose first vertex is the old vertex `k`.
    pub fn rotated(&self, k: usize) -> ConvexPolygon {
        let n = self.n();
        ConvexPolygon {
            vertices: (0..n).map(|i| self.vertices[(i + k) % n]).collect(),
        }
    }

    /// Same polygon shifted by `-origin`.
    pub fn translated(&self, origin: Point) -> ConvexPolygon {
        ConvexPolygon {
            vertices: self.vertices.iter().map(|&p| p - origin).collect(),
        }
    }

    /// Builds a polygon without validation. Callers must guarantee the
    /// vertices are strictly convex and counter-clockwise.
    pub(crate) fn from_trusted(vertices: Vec<Point>) -> Self {
        ConvexPolygon { vertices }
    }
}

/// Checks strict convexity, normalizing clockwise input to counter-clockwise
/// order (starting from the same first vertex).
pub fn validate_convex_polygon(points: &[Point], tol: Tolerance) -> Result<ConvexPolygon> {
    let n = points.len();
    if n < 3 {
        return Err(Error::TooFewVertices(n));
    }
    if let Some(p) = points.iter().find(|p| !p.is_finite()) {
        return Err(Error::DegenerateInput(format!("non-finite point {p:?}")));
    }
    let mut sign = 0.0f64;
    let mut turning = 0.0;
    for i in 0..n {
        let p0 = points[(i + n - 1) % n];
        let p1 = points[i];
        let p2 = points[(i + 1) % n];
        let e1 = p1 - p0;
        let e2 = p2 - p1;
        let scale = p0.norm().max(p1.norm()).max(p2.norm());
        if e1.norm() <= DEGENERATE_ULPS * scale || e2.norm() <= DEGENERATE_ULPS * scale {
            return Err(Error::NotStrictlyConvex(i));
        }
        let c = e1.cross(e2);
        if c.abs() <= tol.eps * e1.norm() * e2.norm() {
            return Err(Error::NotStrictlyConvex(i));
        }
        if sign == 0.0 {
            sign = c.signum();
        } else if c.signum() != sign {
            return Err(Error::NotConvex(format!("turn direction flips at vertex {i}")));
        }
        turning += c.atan2(e1.dot(e2));
    }
    if (turning.abs() - 2.0 * PI).abs() > 1e-6 {
        return Err(Error::NotConvex(format!(
            "boundary winds {:.3} turns",
            turning.abs() / (2.0 * PI)
        )));
    }
    let vertices = if sign > 0.0 {
        points.to_vec()
    } else {
        std::iter::once(points[0])
            .chain(points[1..].iter().rev().copied())
            .collect()
    };
    Ok(ConvexPolygon { vertices })
}

/// Interior angle at vertex `i` (between sides `i - 1` and `i`), in `(0, pi)`.
pub fn interior_angle(p: &ConvexPolygon, i: usize) -> f64 {
    let n = p.n();
    let v = p.vertex(i);
    let a = p.vertex((i + n - 1) % n) - v;
    let b = p.vertex((i + 1) % n) - v;
    a.cross(b).abs().atan2(a.dot(b))
}

fn inward_normal(l: &Line, poly: &ConvexPolygon) -> Point {
    let nrm = l.normal();
    if l.signed_distance(poly.centroid()) >= 0.0 {
        nrm
    } else {
        -nrm
    }
}

/// Locus of points at equal signed distance from both lines, measured
/// positively towards `poly`. For crossing lines this is the bisector of the
/// angle that contains the polygon; for parallel lines the mid-parallel.
pub fn interior_bisector(l1: &Line, l2: &Line, poly: &ConvexPolygon) -> Result<Line> {
    let n1 = inward_normal(l1, poly);
    let n2 = inward_normal(l2, poly);
    let c1 = n1.dot(l1.point);
    let c2 = n2.dot(l2.point);
    equal_distance_line(n1, c1, n2, c2)
        .ok_or_else(|| Error::DegenerateInput("bisector of identical or co-oriented lines".to_string()))
}

/// `{p : n1.p - c1 = n2.p - c2}` for unit normals `n1 != n2`.
pub(crate) fn equal_distance_line(n1: Point, c1: f64, n2: Point, c2: f64) -> Option<Line> {
    let w = n1 - n2;
    let w2 = w.dot(w);
    if w2 <= 1e-24 {
        return None;
    }
    let c = c1 - c2;
    Some(Line {
        point: w * (c / w2),
        direction: w.perp().normalized(),
    })
}

/// Whether `line` meets the closed segment `seg`; the second flag reports a
/// tolerance-decided contact at an endpoint.
pub fn line_meets_segment(line: &Line, seg: &Segment, tol: Tolerance) -> (bool, bool) {
    line_meets_segment_within(line, seg, tol.eps * seg.length())
}

/// [`line_meets_segment`] with an explicit endpoint slack.
pub fn line_meets_segment_within(line: &Line, seg: &Segment, slack: f64) -> (bool, bool) {
    let d0 = line.signed_distance(seg.a);
    let d1 = line.signed_distance(seg.b);
    if d0 * d1 < 0.0 {
        // Strict sign change; still flag it when an endpoint grazes.
        let graze = d0.abs().min(d1.abs()) <= slack;
        return (true, graze);
    }
    let near = d0.abs().min(d1.abs()) <= slack;
    (near, near)
}
