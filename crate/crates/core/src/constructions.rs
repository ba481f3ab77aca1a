//! Polygon generators: regular and random polygons, the corner gadget that
//! grows extremal polygons clique by clique, and the quadrilateral probe.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{
    disks_intersect, interior_angle, validate_convex_polygon, ConvexPolygon, Disk, IntersectionMode, Point, Tolerance,
};

/// Relative overlap every intersecting pair must exceed to count as proper.
pub const PROPER_MARGIN: f64 = 1e-6;

/// Halving steps allowed for each certified choice.
pub const HALVING_BUDGET: usize = 60;

/// First corner offset `|A'B|` tried, as a fraction of the shorter of the
/// two sides at `B`.
const CORNER_START: f64 = 0.9;
/// Offset of `B'` as a fraction of the largest offset keeping `A'B'C'` acute.
const APEX_FRACTION: f64 = 0.05;
/// Position of `T` as a fraction of the largest distance from `B'` at which
/// the circle on `C'T` still crosses `A'B'` twice.
const TANGENT_FRACTION: f64 = 0.99;
/// First position of `S` along the arc from `R` to `T`.
const ARC_START: f64 = 0.02;

/// Slack of a pair: positive when the overlap clears the properness margin.
pub fn overlap_slack(d1: &Disk, d2: &Disk) -> f64 {
    d1.overlap_depth(d2) - PROPER_MARGIN * d1.radius.min(d2.radius)
}

/// A pair is proper when it is disjoint or overlaps by more than the margin.
pub fn pair_is_proper(d1: &Disk, d2: &Disk, tol: Tolerance) -> bool {
    !disks_intersect(d1, d2, IntersectionMode::Closed, tol) || overlap_slack(d1, d2) > 0.0
}

fn cyclic_neighbors(i: usize, j: usize, n: usize) -> bool {
    (i + 1) % n == j || (j + 1) % n == i
}

/// First improper pair of side disks, if any.
///
/// Disks of adjacent sides meet at the shared vertex and overlap whenever the
/// polygon is strictly convex, so only non-adjacent pairs are held to the
/// margin.
pub fn improper_pair(poly: &ConvexPolygon, tol: Tolerance) -> Option<(usize, usize)> {
    let n = poly.n();
    let disks: Vec<Disk> = (0..n).map(|i| poly.side_disk(i)).collect();
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| !cyclic_neighbors(i, j, n))
        .find(|&(i, j)| !pair_is_proper(&disks[i], &disks[j], tol))
}

pub fn regular_polygon(n: usize, circumradius: f64) -> Result<ConvexPolygon> {
    if n < 3 {
        return Err(Error::TooFewVertices(n));
    }
    if !(circumradius > 0.0 && circumradius.is_finite()) {
        return Err(Error::DegenerateInput(format!("circumradius {circumradius}")));
    }
    let pts: Vec<Point> = (0..n)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / n as f64;
            Point::new(circumradius * a.cos(), circumradius * a.sin())
        })
        .collect();
    Ok(ConvexPolygon::from_trusted(pts))
}

/// The quadrilateral (1,0), (0,2), (-1,0), (0,-1): its four side disks
/// pairwise intersect and its angle at (0,2) is acute.
pub fn base_quadrilateral() -> ConvexPolygon {
    ConvexPolygon::from_trusted(vec![
        Point::new(1.0, 0.0),
        Point::new(0.0, 2.0),
        Point::new(-1.0, 0.0),
        Point::new(0.0, -1.0),
    ])
}

const GENERATION_ATTEMPTS: usize = 100;

/// Random strictly convex polygon, deterministic in `seed`.
///
/// Edge directions are sorted random angles with a minimum gap, edge lengths
/// are random and corrected by a linear term so the edges close up, and the
/// result is rotated and stretched by a random linear map.
pub fn random_convex_polygon(n: usize, seed: u64) -> Result<ConvexPolygon> {
    if n < 3 {
        return Err(Error::TooFewVertices(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..GENERATION_ATTEMPTS {
        if let Some(p) = try_random_polygon(n, &mut rng) {
            return Ok(p);
        }
    }
    Err(Error::GenerationFailed(GENERATION_ATTEMPTS))
}

fn try_random_polygon(n: usize, rng: &mut ChaCha8Rng) -> Option<ConvexPolygon> {
    let floor = 0.1 * 2.0 * PI / n as f64;
    let w: Vec<f64> = (0..n).map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
    let total: f64 = w.iter().sum();
    let spread = 2.0 * PI - floor * n as f64;
    let start = rng.gen::<f64>() * 2.0 * PI;
    let mut theta = Vec::with_capacity(n);
    let mut acc = start;
    for &wk in &w {
        theta.push(acc);
        acc += floor + spread * wk / total;
    }
    let dirs: Vec<Point> = theta.iter().map(|&t| Point::new(t.cos(), t.sin())).collect();
    let mut len: Vec<f64> = (0..n).map(|_| 0.5 + rng.gen::<f64>()).collect();
    // Solve for (a, b) so that sum (L_k + a c_k + b s_k) u_k = 0.
    let (mut cc, mut cs, mut ss, mut rx, mut ry) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (u, &l) in dirs.iter().zip(&len) {
        cc += u.x * u.x;
        cs += u.x * u.y;
        ss += u.y * u.y;
        rx += l * u.x;
        ry += l * u.y;
    }
    let det = cc * ss - cs * cs;
    if det.abs() < 1e-12 * (cc * ss).max(1e-300) {
        return None;
    }
    let a = (-rx * ss + ry * cs) / det;
    let b = (-ry * cc + rx * cs) / det;
    for (l, u) in len.iter_mut().zip(&dirs) {
        *l += a * u.x + b * u.y;
    }
    let mean = len.iter().sum::<f64>() / n as f64;
    if len.iter().any(|&l| l.is_nan() || l <= 0.05 * mean) {
        return None;
    }
    let mut pts = Vec::with_capacity(n);
    let mut cur = Point::new(0.0, 0.0);
    for (u, &l) in dirs.iter().zip(&len) {
        pts.push(cur);
        cur = cur + *u * l;
    }
    // Random rotation and axis stretch, then scale to unit extent.
    let phi = rng.gen::<f64>() * 2.0 * PI;
    let stretch = 0.4 + 1.6 * rng.gen::<f64>();
    let (sn, cs) = phi.sin_cos();
    let centroid = pts.iter().fold(Point::new(0.0, 0.0), |s, &p| s + p) * (1.0 / n as f64);
    let mut ext: f64 = 0.0;
    for p in pts.iter_mut() {
        let q = *p - centroid;
        let r = Point::new(q.x * cs - q.y * sn, q.x * sn + q.y * cs);
        *p = Point::new(r.x * stretch, r.y);
        ext = ext.max(p.x.abs()).max(p.y.abs());
    }
    for p in pts.iter_mut() {
        *p = *p * (1.0 / ext);
    }
    validate_convex_polygon(&pts, Tolerance::default()).ok()
}

/// Output of one gadget attachment.
#[derive(Debug, Clone)]
pub struct GadgetResult {
    pub polygon: ConvexPolygon,
    /// Sides carried over from the input polygon, in the order of the input
    /// sides they replace.
    pub old_block: Vec<usize>,
    /// The `m` new consecutive sides.
    pub new_block: Vec<usize>,
    /// Vertex of the result where the gadget is acute (set when `m = 4`).
    pub acute_vertex: Option<usize>,
    /// Corner offset `|A'B|` that was certified.
    pub delta: f64,
    /// Smallest properness slack over the pairs that were checked, relative
    /// to the smaller radius.
    pub min_relative_slack: f64,
}

/// Most acute vertex (smallest interior angle, ties to the smallest index),
/// if its angle is below a right angle.
pub fn acute_vertex(poly: &ConvexPolygon) -> Option<usize> {
    let mut best = (f64::INFINITY, 0);
    for i in 0..poly.n() {
        let a = interior_angle(poly, i);
        if a < best.0 {
            best = (a, i);
        }
    }
    (best.0 < PI / 2.0).then_some(best.1)
}

/// Replaces the most acute corner of `poly` by `m` new sides whose disks
/// pairwise intersect, keeping every other intersection unchanged.
pub fn attach_gadget(poly: &ConvexPolygon, m: usize, tol: Tolerance) -> Result<GadgetResult> {
    if !(1..=4).contains(&m) {
        return Err(Error::PreconditionFailed(format!("gadget size must be 1..=4, got {m}")));
    }
    let b = acute_vertex(poly).ok_or_else(|| Error::PreconditionFailed("polygon has no acute angle".into()))?;
    if let Some((i, j)) = improper_pair(poly, tol) {
        return Err(Error::PreconditionFailed(format!(
            "side disks {i} and {j} do not intersect properly"
        )));
    }
    attach_gadget_at(poly, b, m, tol)
}

/// [`attach_gadget`] at a given acute vertex, assuming the side disks of
/// `poly` are proper.
pub fn attach_gadget_at(poly: &ConvexPolygon, b: usize, m: usize, tol: Tolerance) -> Result<GadgetResult> {
    let n = poly.n();
    if !(1..=4).contains(&m) || b >= n {
        return Err(Error::PreconditionFailed(format!(
            "bad gadget request m={m} at vertex {b}"
        )));
    }
    let beta = interior_angle(poly, b);
    if beta >= PI / 2.0 {
        return Err(Error::PreconditionFailed(format!("angle at vertex {b} is not acute")));
    }
    let a_pt = poly.vertex((b + n - 1) % n);
    let b_pt = poly.vertex(b);
    let c_pt = poly.vertex((b + 1) % n);
    let mut delta = a_pt.dist(b_pt).min(b_pt.dist(c_pt)) * CORNER_START;
    let mut last = String::new();
    for _ in 0..HALVING_BUDGET {
        match gadget_candidate(poly, b, m, a_pt, b_pt, c_pt, beta, delta, tol) {
            Ok(res) => return Ok(res),
            Err(why) => last = why,
        }
        delta *= 0.5;
    }
    Err(Error::ConstructionFailed(format!(
        "no certified corner offset at vertex {b} for m={m} after {HALVING_BUDGET} halvings; last failure: {last}"
    )))
}

/// Corner points replacing `B`, in counter-clockwise order from `A'` to `C'`,
/// for a given `S` parameter.
struct Corner {
    a1: Point,
    c1: Point,
    b1: Point,
    r: Point,
    t: Point,
    arc: Option<(Point, f64, f64, f64)>,
}

impl Corner {
    fn new(a: Point, b: Point, c: Point, beta: f64, delta: f64) -> Option<Corner> {
        let a1 = b + (a - b).normalized() * delta;
        let c1 = b + (c - b).normalized() * delta;
        let bis = ((a - b).normalized() + (c - b).normalized()).normalized();
        let mu = APEX_FRACTION * delta * ((beta / 2.0).cos() - (beta / 2.0).sin());
        let b1 = b + bis * mu;
        // T on B'C' so that the circle on C'T meets B'A' twice.
        let l = b1.dist(c1);
        let u_c = (c1 - b1).normalized();
        let u_a = (a1 - b1).normalized();
        let gamma = u_c.dot(u_a).clamp(-1.0, 1.0).acos();
        let sg = gamma.sin();
        let tau = TANGENT_FRACTION * l * (1.0 - sg) / (1.0 + sg);
        let t = b1 + u_c * tau;
        let center = t.midpoint(c1);
        let rad = 0.5 * t.dist(c1);
        // |b1 + s u_a - center|^2 = rad^2, nearer root.
        let w = b1 - center;
        let pb = w.dot(u_a);
        let disc = pb * pb - (w.dot(w) - rad * rad);
        if disc.is_nan() || disc <= 0.0 {
            return None;
        }
        let s_r = -pb - disc.sqrt();
        if !(s_r > 0.0 && s_r < b1.dist(a1)) {
            return None;
        }
        let r = b1 + u_a * s_r;
        let th_r = (r.y - center.y).atan2(r.x - center.x);
        let th_t = (t.y - center.y).atan2(t.x - center.x);
        // Sweep from R to T on the side facing B'.
        let mut sweep = th_t - th_r;
        while sweep > PI {
            sweep -= 2.0 * PI;
        }
        while sweep < -PI {
            sweep += 2.0 * PI;
        }
        let mid_a = th_r + 0.5 * sweep;
        let mid = center + Point::new(mid_a.cos(), mid_a.sin()) * rad;
        if mid.dist(b1) > center.dist(b1) {
            sweep -= 2.0 * PI * sweep.signum();
        }
        Some(Corner {
            a1,
            c1,
            b1,
            r,
            t,
            arc: Some((center, rad, th_r, sweep)),
        })
    }

    fn s_at(&self, lambda: f64) -> Point {
        let (center, rad, th_r, sweep) = self.arc.expect("arc");
        let a = th_r + lambda * sweep;
        center + Point::new(a.cos(), a.sin()) * rad
    }

    fn points(&self, m: usize, s: Option<Point>) -> Vec<Point> {
        match m {
            1 => vec![self.a1, self.c1],
            2 => vec![self.a1, self.b1, self.c1],
            3 => vec![self.a1, self.r, self.t, self.c1],
            _ => vec![self.a1, self.r, s.expect("S point"), self.t, self.c1],
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn gadget_candidate(
    poly: &ConvexPolygon,
    b: usize,
    m: usize,
    a: Point,
    bp: Point,
    c: Point,
    beta: f64,
    delta: f64,
    tol: Tolerance,
) -> std::result::Result<GadgetResult, String> {
    let corner = Corner::new(a, bp, c, beta, delta).ok_or("corner construction degenerate")?;
    if m < 4 {
        let pts = corner.points(m, None);
        return certify(poly, b, m, &pts, delta, tol);
    }
    let mut lambda = ARC_START;
    let mut first = None;
    for _ in 0..HALVING_BUDGET {
        let pts = corner.points(4, Some(corner.s_at(lambda)));
        match certify(poly, b, 4, &pts, delta, tol) {
            Ok(res) => return Ok(res),
            Err(why) => {
                first.get_or_insert(why);
            }
        }
        lambda *= 0.5;
    }
    Err(format!("no S on the arc: {}", first.unwrap_or_default()))
}

/// Builds the polygon with `B` replaced by `pts` and checks the contract:
/// strict convexity, unchanged intersections among old sides, a clique on
/// the new sides, properness of every touched pair, and for `m = 4` an acute
/// angle at the new vertex `T`.
fn certify(
    poly: &ConvexPolygon,
    b: usize,
    m: usize,
    pts: &[Point],
    delta: f64,
    tol: Tolerance,
) -> std::result::Result<GadgetResult, String> {
    let n = poly.n();
    let mut verts = Vec::with_capacity(n + m);
    verts.extend_from_slice(&poly.vertices()[..b]);
    verts.extend_from_slice(pts);
    verts.extend_from_slice(&poly.vertices()[b + 1..]);
    let q = validate_convex_polygon(&verts, tol).map_err(|e| e.to_string())?;
    if q.vertex(0) != verts[0] || q.n() != n + m {
        return Err("orientation changed".into());
    }
    let map = |j: usize| if j < b { j } else { j + m };
    let old_block: Vec<usize> = (0..n).map(map).collect();
    let new_block: Vec<usize> = (b..b + m).collect();
    let disks: Vec<Disk> = (0..q.n()).map(|i| q.side_disk(i)).collect();
    let old: Vec<Disk> = (0..n).map(|i| poly.side_disk(i)).collect();
    let touched_old = [(b + n - 1) % n, b];
    let mut min_slack = f64::INFINITY;
    let qn = q.n();
    let mut track = |d1: &Disk, d2: &Disk| {
        if disks_intersect(d1, d2, IntersectionMode::Closed, tol) {
            min_slack = min_slack.min(overlap_slack(d1, d2) / d1.radius.min(d2.radius));
        }
    };
    for &i in &touched_old {
        for j in 0..n {
            if j == i {
                continue;
            }
            let before = disks_intersect(&old[i], &old[j], IntersectionMode::Closed, tol);
            let (x, y) = (&disks[map(i)], &disks[map(j)]);
            let after = disks_intersect(x, y, IntersectionMode::Closed, tol);
            if before != after {
                return Err(format!("old pair ({i}, {j}) changed from {before} to {after}"));
            }
            if cyclic_neighbors(map(i), map(j), qn) {
                continue;
            }
            if !pair_is_proper(x, y, tol) {
                return Err(format!("old pair ({i}, {j}) is not proper"));
            }
            track(x, y);
        }
    }
    for (k, &i) in new_block.iter().enumerate() {
        for &j in &new_block[k + 1..] {
            if !disks_intersect(&disks[i], &disks[j], IntersectionMode::Closed, tol) {
                return Err(format!("new sides {i} and {j} are disjoint"));
            }
        }
    }
    if m == 4 {
        for &i in &new_block {
            for j in (0..qn).filter(|&j| j != i && !cyclic_neighbors(i, j, qn)) {
                if !pair_is_proper(&disks[i], &disks[j], tol) {
                    return Err(format!("pair ({i}, {j}) is not proper"));
                }
                track(&disks[i], &disks[j]);
            }
        }
        let t = b + 3;
        if interior_angle(&q, t) >= PI / 2.0 {
            return Err("angle at T is not acute".into());
        }
    }
    Ok(GadgetResult {
        polygon: q,
        old_block,
        new_block,
        acute_vertex: (m == 4).then_some(b + 3),
        delta,
        min_relative_slack: min_slack,
    })
}

/// Polygon with `n` sides whose disks split into `ceil(n/4)` consecutive
/// cliques, so its independence number is `ceil(n/4)`.
pub fn extremal_polygon(n: usize, tol: Tolerance) -> Result<ConvexPolygon> {
    Ok(extremal_polygon_with_blocks(n, tol)?.0)
}

/// [`extremal_polygon`] together with its clique blocks.
pub fn extremal_polygon_with_blocks(n: usize, tol: Tolerance) -> Result<(ConvexPolygon, Vec<Vec<usize>>)> {
    if n < 3 {
        return Err(Error::TooFewVertices(n));
    }
    if n == 3 {
        let h = 3f64.sqrt() / 2.0;
        let tri = ConvexPolygon::from_trusted(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.5, h)]);
        return Ok((tri, vec![vec![0, 1, 2]]));
    }
    let (t, r) = (n / 4, n % 4);
    let mut poly = base_quadrilateral();
    let mut blocks = vec![vec![0, 1, 2, 3]];
    let mut acute = acute_vertex(&poly).expect("base quadrilateral is acute");
    // Each gadget is orders of magnitude smaller than the last, so the
    // polygon is re-centred on the corner being cut: coordinates near the
    // origin keep full relative precision.
    let mut grow = |poly: &mut ConvexPolygon, acute: &mut usize, m: usize| -> Result<()> {
        let anchored = poly.translated(poly.vertex(*acute));
        let res = attach_gadget_at(&anchored, *acute, m, tol)?;
        for block in blocks.iter_mut() {
            for s in block.iter_mut() {
                *s = res.old_block[*s];
            }
        }
        blocks.push(res.new_block.clone());
        if let Some(a) = res.acute_vertex {
            *acute = a;
        }
        *poly = res.polygon;
        Ok(())
    };
    for _ in 1..t {
        grow(&mut poly, &mut acute, 4)?;
    }
    if r > 0 {
        grow(&mut poly, &mut acute, r)?;
    }
    for b in blocks.iter_mut() {
        b.sort_unstable();
    }
    Ok((poly, blocks))
}

/// Whether some opposite pair of side disks of a quadrilateral intersects.
pub fn c4_probe(q: &ConvexPolygon, tol: Tolerance) -> Result<bool> {
    if q.n() != 4 {
        return Err(Error::WrongArity {
            expected: 4,
            got: q.n(),
        });
    }
    let d: Vec<Disk> = (0..4).map(|i| q.side_disk(i)).collect();
    let mode = IntersectionMode::Closed;
    Ok(disks_intersect(&d[0], &d[2], mode, tol) || disks_intersect(&d[1], &d[3], mode, tol))
}

/// Both opposite-side inequalities `|s0| + |s2| >= 2 |m1 m3|` and
/// `|s1| + |s3| >= 2 |m0 m2|`, each up to `eps` times the perimeter.
pub fn midpoint_inequality(q: &ConvexPolygon, tol: Tolerance) -> Result<bool> {
    if q.n() != 4 {
        return Err(Error::WrongArity {
            expected: 4,
            got: q.n(),
        });
    }
    let len: Vec<f64> = (0..4).map(|i| q.side(i).length()).collect();
    let mid: Vec<Point> = (0..4).map(|i| q.side(i).midpoint()).collect();
    let slack = tol.eps * len.iter().sum::<f64>();
    Ok(len[0] + len[2] >= 2.0 * mid[1].dist(mid[3]) - slack && len[1] + len[3] >= 2.0 * mid[0].dist(mid[2]) - slack)
}

/// Hull of four uniform points in the unit square, redrawn until all four
/// are hull vertices.
pub fn random_quadrilateral<R: Rng>(rng: &mut R, tol: Tolerance) -> ConvexPolygon {
    loop {
        let mut p: Vec<Point> = (0..4).map(|_| Point::new(rng.gen(), rng.gen())).collect();
        let c = p.iter().fold(Point::new(0.0, 0.0), |s, &q| s + q) * 0.25;
        p.sort_by(|a, b| {
            let ta = (a.y - c.y).atan2(a.x - c.x);
            let tb = (b.y - c.y).atan2(b.x - c.x);
            ta.total_cmp(&tb)
        });
        if let Ok(q) = validate_convex_polygon(&p, tol) {
            return q;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct C4ProbeReport {
    pub trials: usize,
    /// Trials with an intersecting opposite pair.
    pub intersecting: usize,
    /// Trials where both midpoint inequalities held.
    pub midpoint_ok: usize,
    /// Trial ids that failed either check, sorted.
    pub failures: Vec<usize>,
}

impl C4ProbeReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs the quadrilateral probe on `trials` random quadrilaterals. Trial `i`
/// draws from stream `i` of the generator seeded by `seed`, so results do not
/// depend on the thread count.
pub fn run_c4_probe(trials: usize, seed: u64, tol: Tolerance) -> C4ProbeReport {
    let outcomes: Vec<(bool, bool)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let q = random_quadrilateral(&mut rng, tol);
            let hit = c4_probe(&q, tol).expect("quadrilateral");
            let ineq = midpoint_inequality(&q, tol).expect("quadrilateral");
            (hit, ineq)
        })
        .collect();
    let failures = outcomes
        .iter()
        .enumerate()
        .filter(|(_, &(h, m))| !(h && m))
        .map(|(i, _)| i)
        .collect();
    C4ProbeReport {
        trials,
        intersecting: outcomes.iter().filter(|o| o.0).count(),
        midpoint_ok: outcomes.iter().filter(|o| o.1).count(),
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::graph_bruteforce;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn regular_examples() {
        let t = regular_polygon(3, 1.0).unwrap();
        assert!((interior_angle(&t, 0) - PI / 3.0).abs() < 1e-12);
        assert_eq!(regular_polygon(2, 1.0).unwrap_err(), Error::TooFewVertices(2));
        let sq = regular_polygon(4, 1.0).unwrap();
        assert_eq!(graph_bruteforce(&sq, IntersectionMode::Closed, tol()).edge_count(), 6);
        assert_eq!(graph_bruteforce(&sq, IntersectionMode::Open, tol()).edge_count(), 4);
    }

    #[test]
    fn random_polygons_are_valid_and_deterministic() {
        for n in [3, 4, 5, 17, 100, 1000] {
            for seed in 0..5 {
                let p = random_convex_polygon(n, seed).unwrap();
                assert_eq!(p.n(), n);
                assert!(validate_convex_polygon(p.vertices(), tol()).is_ok());
            }
        }
        assert_eq!(
            random_convex_polygon(50, 7).unwrap(),
            random_convex_polygon(50, 7).unwrap()
        );
        assert_ne!(
            random_convex_polygon(50, 7).unwrap(),
            random_convex_polygon(50, 8).unwrap()
        );
    }

    #[test]
    fn base_quadrilateral_is_proper_and_acute() {
        let p = base_quadrilateral();
        assert_eq!(acute_vertex(&p), Some(1));
        assert_eq!(improper_pair(&p, tol()), None);
        assert_eq!(graph_bruteforce(&p, IntersectionMode::Closed, tol()).edge_count(), 6);
    }

    #[test]
    fn gadget_on_base() {
        for m in 1..=4 {
            let res = attach_gadget(&base_quadrilateral(), m, tol()).unwrap();
            assert_eq!(res.polygon.n(), 4 + m);
            assert_eq!(res.new_block, (1..1 + m).collect::<Vec<_>>());
            assert_eq!(res.old_block, vec![0, 1 + m, 2 + m, 3 + m]);
        }
    }

    #[test]
    fn gadget_on_triangle() {
        let tri = regular_polygon(3, 1.0).unwrap();
        let res = attach_gadget(&tri, 2, tol()).unwrap();
        assert_eq!(res.polygon.n(), 5);
        let g = graph_bruteforce(&res.polygon, IntersectionMode::Closed, tol());
        assert!(g.has_edge(res.new_block[0], res.new_block[1]));
    }

    #[test]
    fn gadget_rejects_bad_input() {
        let sq = regular_polygon(4, 1.0).unwrap();
        assert!(matches!(
            attach_gadget(&sq, 4, tol()),
            Err(Error::PreconditionFailed(_))
        ));
        assert!(matches!(
            attach_gadget(&base_quadrilateral(), 5, tol()),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn extremal_blocks_are_cliques() {
        for n in 3..=24 {
            let (p, blocks) = extremal_polygon_with_blocks(n, tol()).unwrap();
            assert_eq!(p.n(), n);
            assert_eq!(blocks.len(), n.div_ceil(4));
            let g = graph_bruteforce(&p, IntersectionMode::Closed, tol());
            for b in &blocks {
                for (i, &x) in b.iter().enumerate() {
                    for &y in &b[i + 1..] {
                        assert!(g.has_edge(x, y), "n={n} block {b:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn c4_probe_examples() {
        let sq = regular_polygon(4, 1.0).unwrap();
        assert!(c4_probe(&sq, tol()).unwrap());
        assert!(c4_probe(&base_quadrilateral(), tol()).unwrap());
        let tri = regular_polygon(3, 1.0).unwrap();
        assert_eq!(c4_probe(&tri, tol()), Err(Error::WrongArity { expected: 4, got: 3 }));
        let rep = run_c4_probe(2000, 3, tol());
        assert!(rep.passed());
        assert_eq!(rep, run_c4_probe(2000, 3, tol()));
    }
}
