//! Realization of outerplanar Hamiltonian graphs as side-disk graphs.
//!
//! Input graphs are a cycle `0, 1, ..., n-1` plus non-crossing chords. The
//! realization grows face by face: a regular polygon (or a fixed hexagon for
//! two adjacent quadrilateral faces) realizes the first face, and each further
//! face is attached by cutting the polygon corner between the two sides of its
//! chord and subdividing the cut.

use std::collections::{HashMap, VecDeque};
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constructions::{pair_is_proper, regular_polygon, HALVING_BUDGET, PROPER_MARGIN};
use crate::decomposition::PropertyCheck;
use crate::error::{Error, Result};
use crate::geometry::{
    disks_intersect, interior_angle, validate_convex_polygon, ConvexPolygon, Disk, IntersectionMode, Point, Tolerance,
};
use crate::graph::{graph_bruteforce, IntersectionGraph};

/// A Hamiltonian cycle `0..n` with non-crossing chords.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OuterplanarInput {
    n: usize,
    /// Sorted, each as `(i, j)` with `i < j`.
    chords: Vec<(usize, usize)>,
}

impl OuterplanarInput {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn chords(&self) -> &[(usize, usize)] {
        &self.chords
    }

    pub fn graph(&self) -> IntersectionGraph {
        IntersectionGraph::cycle_with_chords(self.n, &self.chords)
    }

    pub fn is_c4(&self) -> bool {
        self.n == 4 && self.chords.is_empty()
    }
}

/// Validates `(n, chords)`: chords must join non-adjacent cycle vertices,
/// appear once, and pairwise not cross.
pub fn parse_outerplanar(n: usize, chords: &[(usize, usize)]) -> Result<OuterplanarInput> {
    if n < 3 {
        return Err(Error::TooFewVertices(n));
    }
    let mut norm = Vec::with_capacity(chords.len());
    for &(a, b) in chords {
        let c = (a.min(b), a.max(b));
        if c.1 >= n {
            return Err(Error::InvalidChord(c, format!("endpoint out of range 0..{n}")));
        }
        if c.0 == c.1 {
            return Err(Error::InvalidChord(c, "loop".into()));
        }
        if c.1 - c.0 == 1 || c.1 - c.0 == n - 1 {
            return Err(Error::InvalidChord(c, "duplicates a cycle edge".into()));
        }
        norm.push(c);
    }
    norm.sort_unstable();
    if let Some(w) = norm.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::InvalidChord(w[0], "duplicate chord".into()));
    }
    for (k, &(a, b)) in norm.iter().enumerate() {
        for &(c, d) in &norm[k + 1..] {
            if a == c || a == d || b == c || b == d {
                continue;
            }
            let inside = |v: usize| a < v && v < b;
            if inside(c) != inside(d) {
                return Err(Error::NotOuterplanar((a, b), (c, d)));
            }
        }
    }
    Ok(OuterplanarInput { n, chords: norm })
}

/// Every cycle-plus-non-crossing-chords graph on `n` vertices, one per class
/// under rotations and reflections of the labels.
pub fn outerplanar_inputs(n: usize) -> Vec<OuterplanarInput> {
    if n < 3 {
        return Vec::new();
    }
    let all: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 2..n).map(move |j| (i, j)))
        .filter(|&(i, j)| !(i == 0 && j == n - 1))
        .collect();
    let crosses = |(a, b): (usize, usize), (c, d): (usize, usize)| {
        a != c && a != d && b != c && b != d && ((a < c && c < b) != (a < d && d < b))
    };
    let mut seen = std::collections::BTreeSet::new();
    let mut chosen = Vec::new();
    fn walk(
        k: usize,
        all: &[(usize, usize)],
        chosen: &mut Vec<(usize, usize)>,
        crosses: &dyn Fn((usize, usize), (usize, usize)) -> bool,
        n: usize,
        seen: &mut std::collections::BTreeSet<Vec<(usize, usize)>>,
    ) {
        if k == all.len() {
            seen.insert(canonical_chords(n, chosen));
            return;
        }
        walk(k + 1, all, chosen, crosses, n, seen);
        if chosen.iter().all(|&c| !crosses(c, all[k])) {
            chosen.push(all[k]);
            walk(k + 1, all, chosen, crosses, n, seen);
            chosen.pop();
        }
    }
    walk(0, &all, &mut chosen, &crosses, n, &mut seen);
    seen.into_iter().map(|chords| OuterplanarInput { n, chords }).collect()
}

/// Smallest sorted chord list over the dihedral images of `chords`.
fn canonical_chords(n: usize, chords: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut best: Option<Vec<(usize, usize)>> = None;
    for reflected in [false, true] {
        for rot in 0..n {
            let map = |v: usize| if reflected { (rot + n - v) % n } else { (rot + v) % n };
            let mut img: Vec<(usize, usize)> = chords
                .iter()
                .map(|&(a, b)| {
                    let (x, y) = (map(a), map(b));
                    (x.min(y), x.max(y))
                })
                .collect();
            img.sort_unstable();
            if best.as_ref().is_none_or(|b| img < *b) {
                best = Some(img);
            }
        }
    }
    best.unwrap_or_default()
}

/// Where the construction starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StartFaces {
    Single(usize),
    /// Two quadrilateral faces sharing a chord.
    Pair(usize, usize),
}

/// Internal faces of the outerplanar embedding and their dual tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceTree {
    /// Each face lists its vertices in increasing (cyclic) order; faces are
    /// sorted lexicographically.
    pub faces: Vec<Vec<usize>>,
    /// Dual edges `(face, face, chord)`.
    pub adjacency: Vec<(usize, usize, (usize, usize))>,
    pub start: StartFaces,
}

impl FaceTree {
    fn neighbors(&self) -> Vec<Vec<(usize, (usize, usize))>> {
        let mut nb = vec![Vec::new(); self.faces.len()];
        for &(f, g, c) in &self.adjacency {
            nb[f].push((g, c));
            nb[g].push((f, c));
        }
        for list in nb.iter_mut() {
            list.sort_unstable();
        }
        nb
    }
}

pub fn face_tree(g: &OuterplanarInput) -> Result<FaceTree> {
    if g.is_c4() {
        return Err(Error::NotRealizable("the 4-cycle has no side-disk realization".into()));
    }
    let mut faces = Vec::new();
    let mut stack = vec![((0..g.n).collect::<Vec<usize>>(), g.chords.clone())];
    while let Some((verts, chords)) = stack.pop() {
        let Some((&(a, b), rest)) = chords.split_first() else {
            faces.push(verts);
            continue;
        };
        let inner: Vec<usize> = verts.iter().copied().filter(|&v| a <= v && v <= b).collect();
        let outer: Vec<usize> = verts.iter().copied().filter(|&v| v <= a || v >= b).collect();
        let (ci, co): (Vec<_>, Vec<_>) = rest.iter().partition(|&&(c, d)| a <= c && d <= b);
        stack.push((inner, ci));
        stack.push((outer, co));
    }
    faces.sort();
    let mut by_pair: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (f, face) in faces.iter().enumerate() {
        let k = face.len();
        for i in 0..k {
            let (x, y) = (face[i], face[(i + 1) % k]);
            by_pair.entry((x.min(y), x.max(y))).or_default().push(f);
        }
    }
    let mut adjacency = Vec::with_capacity(g.chords.len());
    for &c in &g.chords {
        match by_pair.get(&c).map(Vec::as_slice) {
            Some(&[f1, f2]) => adjacency.push((f1.min(f2), f1.max(f2), c)),
            _ => return Err(Error::Internal(format!("chord {c:?} does not separate two faces"))),
        }
    }
    adjacency.sort_unstable();
    let start = match faces.iter().position(|f| f.len() != 4) {
        Some(f) => StartFaces::Single(f),
        None => {
            // All faces are quadrilaterals and there are at least two.
            let &(f1, f2, _) = adjacency
                .first()
                .ok_or_else(|| Error::NotRealizable("the 4-cycle has no side-disk realization".into()))?;
            StartFaces::Pair(f1, f2)
        }
    };
    Ok(FaceTree {
        faces,
        adjacency,
        start,
    })
}

/// The hexagon realizing two quadrilateral faces that share a chord; its
/// sides 2 and 5 carry the chord.
pub fn base_hexagon() -> ConvexPolygon {
    validate_convex_polygon(
        &[
            Point::new(-1.0, 0.0),
            Point::new(0.0, -1.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 3.0),
            Point::new(0.0, 4.0),
            Point::new(-1.0, 3.0),
        ],
        Tolerance::default(),
    )
    .expect("hexagon is strictly convex")
}

/// A polygon under construction whose side `i` realizes graph vertex
/// `labels[i]`; labels increase cyclically around the polygon.
struct Labeled {
    poly: ConvexPolygon,
    labels: Vec<usize>,
}

/// First corner offset as a fraction of the shorter side at the corner.
const CUT_START: f64 = 0.5;
/// First outward bulge of the subdivision points, relative to `|AC|`.
const BULGE_START: f64 = 0.25;

/// Realizes `g` as the side-disk graph of a good convex polygon whose side
/// `i` corresponds to vertex `i`.
pub fn realize(g: &OuterplanarInput, tol: Tolerance) -> Result<ConvexPolygon> {
    let tree = face_tree(g)?;
    let nb = tree.neighbors();
    let mut placed = vec![false; tree.faces.len()];
    let mut queue = VecDeque::new();
    let mut cur = match tree.start {
        StartFaces::Single(f) => {
            placed[f] = true;
            queue.push_back(f);
            let face = &tree.faces[f];
            Labeled {
                poly: regular_polygon(face.len(), 1.0)?,
                labels: face.clone(),
            }
        }
        StartFaces::Pair(f1, f2) => {
            placed[f1] = true;
            placed[f2] = true;
            queue.push_back(f1);
            queue.push_back(f2);
            let (_, _, (a, _)) = *tree
                .adjacency
                .iter()
                .find(|&&(x, y, _)| (x, y) == (f1, f2))
                .ok_or_else(|| Error::Internal("start faces are not adjacent".into()))?;
            let mut verts: Vec<usize> = tree.faces[f1].iter().chain(&tree.faces[f2]).copied().collect();
            verts.sort_unstable();
            verts.dedup();
            let p = verts
                .iter()
                .position(|&v| v == a)
                .expect("chord endpoint in start faces");
            let labels = (0..6).map(|j| verts[(p + j + 4) % 6]).collect();
            Labeled {
                poly: base_hexagon(),
                labels,
            }
        }
    };
    while let Some(f) = queue.pop_front() {
        for &(h, chord) in &nb[f] {
            if placed[h] {
                continue;
            }
            placed[h] = true;
            queue.push_back(h);
            cur = attach_face(g, &cur, &tree.faces[h], chord, tol)?;
        }
    }
    let k = cur
        .labels
        .iter()
        .position(|&l| l == 0)
        .ok_or_else(|| Error::Internal("label 0 missing".into()))?;
    let poly = cur.poly.rotated(k);
    let got = graph_bruteforce(&poly, IntersectionMode::Closed, tol);
    if got != g.graph() {
        return Err(Error::Internal("realized graph differs from the input".into()));
    }
    Ok(poly)
}

/// Expected graph on the sides of `labels`: the edges of `g` induced on them.
fn induced_edges(g: &OuterplanarInput, labels: &[usize]) -> Vec<(usize, usize)> {
    let mut pos = vec![usize::MAX; g.n];
    for (i, &l) in labels.iter().enumerate() {
        pos[l] = i;
    }
    let full = g.graph();
    let mut edges: Vec<(usize, usize)> = full
        .edges()
        .iter()
        .filter(|&&(a, b)| pos[a] != usize::MAX && pos[b] != usize::MAX)
        .map(|&(a, b)| (pos[a].min(pos[b]), pos[a].max(pos[b])))
        .collect();
    edges.sort_unstable();
    edges
}

fn attach_face(
    g: &OuterplanarInput,
    cur: &Labeled,
    face: &[usize],
    chord: (usize, usize),
    tol: Tolerance,
) -> Result<Labeled> {
    let m = cur.labels.len();
    // Sides i and i+1 carry the chord endpoints, in cyclic label order.
    let i = (0..m)
        .find(|&i| {
            let (x, y) = (cur.labels[i], cur.labels[(i + 1) % m]);
            (x.min(y), x.max(y)) == chord
        })
        .ok_or_else(|| Error::Internal(format!("chord {chord:?} is not a corner of the polygon")))?;
    let (x, y) = (cur.labels[i], cur.labels[(i + 1) % m]);
    // The face's other vertices, going forward around the cycle from x to y.
    let ahead = |v: usize| (v + g.n - x) % g.n;
    let mut fresh: Vec<usize> = face.iter().copied().filter(|&v| v != x && v != y).collect();
    fresh.sort_unstable_by_key(|&v| ahead(v));
    if fresh.is_empty() || fresh.iter().any(|&v| ahead(v) >= ahead(y)) {
        return Err(Error::Internal(format!(
            "face {face:?} does not hang off chord {chord:?}"
        )));
    }
    let t = fresh.len();
    let mut labels = Vec::with_capacity(m + t);
    labels.extend_from_slice(&cur.labels[..=i]);
    labels.extend_from_slice(&fresh);
    labels.extend_from_slice(&cur.labels[i + 1..]);
    let expected = induced_edges(g, &labels);

    let bi = (i + 1) % m;
    let a1 = cur.poly.vertex(i);
    let b = cur.poly.vertex(bi);
    let c1 = cur.poly.vertex((i + 2) % m);
    let mut delta = CUT_START * a1.dist(b).min(b.dist(c1));
    let mut last = String::new();
    for _ in 0..HALVING_BUDGET {
        let a = b + (a1 - b).normalized() * delta;
        let c = b + (c1 - b).normalized() * delta;
        let mut bulge = BULGE_START;
        let tries = if t == 1 { 1 } else { HALVING_BUDGET };
        for _ in 0..tries {
            let pts = cut_points(a, b, c, t, bulge);
            let mut verts = Vec::with_capacity(m + t);
            for j in 0..m {
                if j == bi {
                    verts.extend_from_slice(&pts);
                } else {
                    verts.push(cur.poly.vertex(j));
                }
            }
            // Keep side i (label x) at index i of the new polygon.
            let shift = if bi == 0 { t } else { 0 };
            verts.rotate_left(shift);
            match certify_step(&verts, &expected, tol) {
                Ok(poly) => return Ok(Labeled { poly, labels }),
                Err(why) => last = why,
            }
            bulge *= 0.5;
        }
        delta *= 0.5;
    }
    Err(Error::ConstructionFailed(format!(
        "attaching face {face:?} at chord {chord:?} failed after {HALVING_BUDGET} halvings; last failure: {last}"
    )))
}

/// `A`, the bulged subdivision points of `AC`, and `C`, counter-clockwise.
fn cut_points(a: Point, b: Point, c: Point, t: usize, bulge: f64) -> Vec<Point> {
    let len = a.dist(c);
    let mid = a.midpoint(c);
    let out = {
        let n = (c - a).perp().normalized();
        if n.dot(b - mid) >= 0.0 {
            n
        } else {
            -n
        }
    };
    let mut pts = Vec::with_capacity(t + 1);
    pts.push(a);
    for j in 1..t {
        let s = j as f64 / t as f64;
        let h = bulge * len * s * (1.0 - s);
        pts.push(a.lerp(c, s) + out * h);
    }
    pts.push(c);
    pts
}

fn certify_step(
    verts: &[Point],
    expected: &[(usize, usize)],
    tol: Tolerance,
) -> std::result::Result<ConvexPolygon, String> {
    let poly = validate_convex_polygon(verts, tol).map_err(|e| e.to_string())?;
    if poly.vertex(1) != verts[1] {
        return Err("orientation changed".into());
    }
    let got = graph_bruteforce(&poly, IntersectionMode::Closed, tol);
    if got.edges() != expected {
        let extra: Vec<_> = got.edges().iter().filter(|e| !expected.contains(e)).collect();
        let missing: Vec<_> = expected.iter().filter(|e| !got.edges().contains(e)).collect();
        return Err(format!(
            "side-disk graph differs from the target: extra {extra:?}, missing {missing:?}"
        ));
    }
    let report = check_good(&poly, tol);
    if !report.is_good() {
        return Err(format!("polygon is not good: {report:?}"));
    }
    Ok(poly)
}

/// The three conditions of a good polygon, each with its violations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoodnessReport {
    /// Non-adjacent intersecting side pairs whose overlap is below the margin.
    pub proper: PropertyCheck<(usize, usize)>,
    /// `(vertex, side)`: a vertex lying in the disk of a non-incident side.
    pub vertex_containment: PropertyCheck<(usize, usize)>,
    /// `(vertex, angle)`: interior angles below 60 degrees.
    pub angles: PropertyCheck<(usize, f64)>,
}

impl GoodnessReport {
    pub fn is_good(&self) -> bool {
        self.proper.passed && self.vertex_containment.passed && self.angles.passed
    }
}

fn check<W>(witnesses: Vec<W>) -> PropertyCheck<W> {
    PropertyCheck {
        passed: witnesses.is_empty(),
        witnesses,
    }
}

/// Checks properness of the side disks, that each vertex lies only in the
/// disks of its two sides, and that every interior angle is at least 60
/// degrees.
pub fn check_good(p: &ConvexPolygon, tol: Tolerance) -> GoodnessReport {
    let n = p.n();
    let disks: Vec<Disk> = (0..n).map(|i| p.side_disk(i)).collect();
    let adjacent = |i: usize, j: usize| (i + 1) % n == j || (j + 1) % n == i;
    let mut improper = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if !adjacent(i, j) && !pair_is_proper(&disks[i], &disks[j], tol) {
                improper.push((i, j));
            }
        }
    }
    let mut contained = Vec::new();
    for v in 0..n {
        let pt = p.vertex(v);
        // Local scale at the vertex: half its shorter side.
        let local = disks[v].radius.min(disks[(v + n - 1) % n].radius);
        for (s, d) in disks.iter().enumerate() {
            if s == v || (s + 1) % n == v {
                continue;
            }
            if d.center.dist(pt) - d.radius <= PROPER_MARGIN * d.radius.min(local) {
                contained.push((v, s));
            }
        }
    }
    let sharp = (0..n)
        .map(|v| (v, interior_angle(p, v)))
        .filter(|&(_, a)| a < PI / 3.0 - tol.eps)
        .collect();
    GoodnessReport {
        proper: check(improper),
        vertex_containment: check(contained),
        angles: check(sharp),
    }
}

/// Which leg disk a subdivision disk is compared with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Leg {
    /// The disk on `AA'`.
    A,
    /// The disk on `CC'`.
    C,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationEntry {
    /// Subdivision disk on `Q_i Q_{i+1}`.
    pub i: usize,
    pub leg: Leg,
    /// Whether the pair is required to be disjoint.
    pub constrained: bool,
    /// Distance from the centre of the subdivision disk to the line through
    /// the leg endpoint perpendicular to the leg.
    pub d: f64,
    /// `d / r`.
    pub ratio: f64,
    /// Direct disk predicate (closed disks).
    pub disjoint: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationReport {
    /// Radius `|AC| / (2k)` of every subdivision disk.
    pub r: f64,
    pub entries: Vec<SeparationEntry>,
}

impl SeparationReport {
    /// Smallest `d / r` over the constrained pairs.
    pub fn min_ratio(&self) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.constrained)
            .map(|e| e.ratio)
            .fold(f64::INFINITY, f64::min)
    }

    /// All constrained pairs are disjoint.
    pub fn all_disjoint(&self) -> bool {
        self.entries.iter().filter(|e| e.constrained).all(|e| e.disjoint)
    }
}

/// Separation of the subdivision disks of `AC` (split into `k` equal parts
/// from `C`) from the leg disks on `AA'` and `CC'`.
///
/// Requires `|BA| = |BC|`, an angle of at least 60 degrees at `B`, `A` inside
/// segment `A'B` and `C` inside segment `BC'`.
pub fn leg_separation(
    a: Point,
    b: Point,
    c: Point,
    a1: Point,
    c1: Point,
    k: usize,
    tol: Tolerance,
) -> Result<SeparationReport> {
    if k < 2 {
        return Err(Error::PreconditionFailed(format!("k must be at least 2, got {k}")));
    }
    let (ba, bc) = (a.dist(b), c.dist(b));
    if !(ba > 0.0 && bc > 0.0) || (ba - bc).abs() > tol.eps * ba.max(bc) {
        return Err(Error::PreconditionFailed(format!(
            "legs differ: |BA| = {ba}, |BC| = {bc}"
        )));
    }
    let beta = (a - b).cross(c - b).abs().atan2((a - b).dot(c - b));
    if beta < PI / 3.0 - tol.eps {
        return Err(Error::PreconditionFailed(format!("angle at B is {beta} < pi/3")));
    }
    let strictly_inside = |p: Point, far: Point| {
        let (u, w) = (p - b, far - b);
        let s = u.dot(w) / w.dot(w);
        u.cross(w).abs() <= tol.eps * u.norm() * w.norm() && s > 0.0 && s < 1.0
    };
    if !strictly_inside(a, a1) {
        return Err(Error::PreconditionFailed("A is not inside segment A'B".into()));
    }
    if !strictly_inside(c, c1) {
        return Err(Error::PreconditionFailed("C is not inside segment BC'".into()));
    }
    let base = a.dist(c);
    let r = base / (2.0 * k as f64);
    let leg_a = Disk::new(a.midpoint(a1), 0.5 * a.dist(a1));
    let leg_c = Disk::new(c.midpoint(c1), 0.5 * c.dist(c1));
    let q = |i: usize| c.lerp(a, i as f64 / k as f64);
    let mut entries = Vec::with_capacity(2 * k);
    for i in 0..k {
        let sub = Disk::new(q(i).midpoint(q(i + 1)), 0.5 * q(i).dist(q(i + 1)));
        for (leg, end, toward, disk, constrained) in
            [(Leg::A, a, b, &leg_a, i + 2 <= k), (Leg::C, c, b, &leg_c, i >= 1)]
        {
            let along = (toward - end).normalized();
            let d = (sub.center - end).dot(along).abs();
            entries.push(SeparationEntry {
                i,
                leg,
                constrained,
                d,
                ratio: d / r,
                disjoint: !disks_intersect(&sub, disk, IntersectionMode::Closed, tol),
            });
        }
    }
    Ok(SeparationReport { r, entries })
}
