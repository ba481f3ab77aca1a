//! Medial axis of a convex polygon.
//!
//! For convex polygons the medial axis coincides with the straight skeleton,
//! so it is computed by shrinking the boundary: every active side moves
//! inward at unit speed and the next event is always the collapse of a side
//! whose two neighboring bisectors meet. Each event yields an axis vertex
//! tangent to the collapsing side and its two current neighbors. Vertices
//! that coincide within tolerance are merged afterwards and their tangent
//! sets unioned, so a regular polygon ends up with a single center vertex.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::geometry::{ConvexPolygon, Point, Tolerance};

#[derive(Debug, Clone, PartialEq)]
pub struct MedialAxisVertex {
    pub center: Point,
    /// Zero for the polygon-vertex leaves.
    pub inradius: f64,
    /// Sorted side indices tangent to the maximal disk.
    pub tangent_sides: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AxisEdge {
    pub a: usize,
    pub b: usize,
    /// The two sides whose bisector carries the edge, smaller index first.
    pub sides: (usize, usize),
}

/// Internal vertices come first (ids `0..internal_count()`, in depth-first
/// order from the largest maximal disk); the leaf of polygon vertex `i` has
/// id `internal_count() + i`.
#[derive(Debug, Clone)]
pub struct MedialAxis {
    n_sides: usize,
    vertices: Vec<MedialAxisVertex>,
    internal: usize,
    edges: Vec<AxisEdge>,
    adj_start: Vec<usize>,
    /// Edge ids, grouped per vertex and sorted by side pair.
    adj: Vec<usize>,
}

impl MedialAxis {
    pub fn vertices(&self) -> &[MedialAxisVertex] {
        &self.vertices
    }

    pub fn vertex(&self, id: usize) -> &MedialAxisVertex {
        &self.vertices[id]
    }

    pub fn internal_count(&self) -> usize {
        self.internal
    }

    pub fn internal_vertices(&self) -> &[MedialAxisVertex] {
        &self.vertices[..self.internal]
    }

    pub fn is_leaf(&self, id: usize) -> bool {
        id >= self.internal
    }

    pub fn leaf_of_polygon_vertex(&self, i: usize) -> usize {
        self.internal + i
    }

    pub fn edges(&self) -> &[AxisEdge] {
        &self.edges
    }

    pub fn side_count(&self) -> usize {
        self.n_sides
    }

    pub fn incident_edges(&self, id: usize) -> &[usize] {
        &self.adj[self.adj_start[id]..self.adj_start[id + 1]]
    }

    pub fn neighbors(&self, id: usize) -> impl Iterator<Item = usize> + '_ {
        self.incident_edges(id).iter().map(move |&e| {
            let e = self.edges[e];
            if e.a == id {
                e.b
            } else {
                e.a
            }
        })
    }

    /// The neighbor of `id` across the edge lying on the bisector of sides
    /// `s` and `t`, if such an edge is incident to `id`.
    pub fn neighbor_on_bisector(&self, id: usize, s: usize, t: usize) -> Option<usize> {
        let key = (s.min(t), s.max(t));
        let inc = self.incident_edges(id);
        let k = inc.binary_search_by(|&e| self.edges[e].sides.cmp(&key)).ok()?;
        let e = self.edges[inc[k]];
        Some(if e.a == id { e.b } else { e.a })
    }

    pub fn segments(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        self.edges
            .iter()
            .map(move |e| (self.vertices[e.a].center, self.vertices[e.b].center))
    }

    pub fn is_tangent(&self, id: usize, side: usize) -> bool {
        self.vertices[id].tangent_sides.binary_search(&side).is_ok()
    }
}

#[derive(Debug, Clone, Copy)]
struct RawNode {
    center: Point,
    radius: f64,
    sides: [usize; 3],
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct EventKey(f64, usize);

impl Eq for EventKey {}

impl PartialOrd for EventKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for EventKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

/// Point at equal signed distance `r` from the three side lines.
fn tritangent(halfplanes: &[(Point, f64)], origin: Point, s: [usize; 3]) -> Option<(Point, f64)> {
    // Rows (nx, ny, -1) . (x, y, r) = c, solved in coordinates local to `origin`.
    let row = |i: usize| {
        let (nrm, c) = halfplanes[i];
        (nrm.x, nrm.y, c - nrm.dot(origin))
    };
    let (a1, b1, c1) = row(s[0]);
    let (a2, b2, c2) = row(s[1]);
    let (a3, b3, c3) = row(s[2]);
    // det of [[a1,b1,-1],[a2,b2,-1],[a3,b3,-1]]
    let det = -(a1 * (b2 - b3) - b1 * (a2 - a3) + (a2 * b3 - a3 * b2));
    if det.abs() < 1e-300 || !det.is_finite() {
        return None;
    }
    let dx = -(c1 * (b2 - b3) - b1 * (c2 - c3) + (c2 * b3 - c3 * b2));
    let dy = -(a1 * (c2 - c3) - c1 * (a2 - a3) + (a2 * c3 - a3 * c2));
    let dr = a1 * (b2 * c3 - b3 * c2) - b1 * (a2 * c3 - a3 * c2) + c1 * (a2 * b3 - a3 * b2);
    let p = Point::new(dx / det, dy / det) + origin;
    let r = dr / det;
    if p.is_finite() && r.is_finite() {
        Some((p, r))
    } else {
        None
    }
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Smaller id stays the representative.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Computes the medial axis with tangent-side annotations.
pub fn compute_medial_axis(poly: &ConvexPolygon, tol: Tolerance) -> MedialAxis {
    let mut axis = skeleton(poly, tol);
    for i in 0..poly.n() {
        axis.vertices[axis.internal + i].center = poly.vertex(i);
    }
    axis
}

fn skeleton(poly: &ConvexPolygon, tol: Tolerance) -> MedialAxis {
    let n = poly.n();
    let halfplanes: Vec<(Point, f64)> = (0..n).map(|i| poly.side_halfplane(i)).collect();
    let mut prev: Vec<usize> = (0..n).map(|i| (i + n - 1) % n).collect();
    let mut next: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let mut version = vec![0u32; n];
    // Node that started the wavefront vertex between side i and next[i];
    // raw internal ids are < n, leaves are encoded as n + vertex index.
    let mut origin: Vec<usize> = (0..n).map(|i| n + (i + 1) % n).collect();
    let mut nodes: Vec<RawNode> = Vec::with_capacity(n.saturating_sub(2));
    let mut raw_edges: Vec<(usize, usize, (usize, usize))> = Vec::with_capacity(2 * n);
    let pair = |a: usize, b: usize| (a.min(b), a.max(b));

    let event = |a: usize, b: usize, c: usize| tritangent(&halfplanes, poly.vertex(b), [a, b, c]);

    let mut heap = BinaryHeap::with_capacity(2 * n);
    if n > 3 {
        for b in 0..n {
            if let Some((_, r)) = event(prev[b], b, next[b]) {
                heap.push(Reverse((EventKey(r, b), 0u32)));
            }
        }
    }
    let mut active = n;
    while active > 3 {
        let Some(Reverse((EventKey(_, b), ver))) = heap.pop() else {
            break;
        };
        if ver != version[b] {
            continue;
        }
        let (a, c) = (prev[b], next[b]);
        let Some((center, radius)) = event(a, b, c) else {
            continue;
        };
        let id = nodes.len();
        nodes.push(RawNode {
            center,
            radius,
            sides: [a, b, c],
        });
        raw_edges.push((origin[a], id, pair(a, b)));
        raw_edges.push((origin[b], id, pair(b, c)));
        origin[a] = id;
        next[a] = c;
        prev[c] = a;
        version[b] = u32::MAX;
        active -= 1;
        for s in [a, c] {
            version[s] += 1;
            if let Some((_, r)) = event(prev[s], s, next[s]) {
                heap.push(Reverse((EventKey(r, s), version[s])));
            }
        }
    }
    // The last three active sides meet at a single vertex.
    let x = (0..n).find(|&s| version[s] != u32::MAX).unwrap_or(0);
    let (y, z) = (next[x], next[next[x]]);
    let (center, radius) = tritangent(&halfplanes, poly.vertex(y), [x, y, z]).unwrap_or((poly.centroid(), 0.0));
    let last = nodes.len();
    nodes.push(RawNode {
        center,
        radius,
        sides: [x, y, z],
    });
    raw_edges.push((origin[x], last, pair(x, y)));
    raw_edges.push((origin[y], last, pair(y, z)));
    raw_edges.push((origin[z], last, pair(z, x)));

    assemble(n, &nodes, &raw_edges, tol)
}

/// Merges coincident raw vertices, renumbers depth-first from the largest
/// maximal disk and builds the per-vertex edge index.
fn assemble(n: usize, nodes: &[RawNode], raw_edges: &[(usize, usize, (usize, usize))], tol: Tolerance) -> MedialAxis {
    let k = nodes.len();
    let mut dsu = DisjointSets::new(k);
    for &(p, q, _) in raw_edges {
        if p < n && q < n {
            let (a, b) = (&nodes[p], &nodes[q]);
            let scale = a.radius.abs().max(b.radius.abs());
            if a.center.dist(b.center) <= tol.eps * scale {
                dsu.union(p, q);
            }
        }
    }
    // Merged groups, keyed by their smallest raw id.
    let mut group_of = vec![usize::MAX; k];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..k {
        let r = dsu.find(i);
        if group_of[r] == usize::MAX {
            group_of[r] = groups.len();
            groups.push(Vec::new());
        }
        group_of[i] = group_of[r];
        groups[group_of[r]].push(i);
    }
    let merged: Vec<MedialAxisVertex> = groups
        .iter()
        .map(|members| {
            let m = members.len() as f64;
            let mut c = Point::default();
            let mut r = 0.0;
            let mut sides = Vec::with_capacity(3 * members.len());
            for &i in members {
                c = c + nodes[i].center;
                r += nodes[i].radius;
                sides.extend_from_slice(&nodes[i].sides);
            }
            sides.sort_unstable();
            sides.dedup();
            MedialAxisVertex {
                center: c * (1.0 / m),
                inradius: r / m,
                tangent_sides: sides,
            }
        })
        .collect();
    let internal = merged.len();
    let node_ref = |x: usize| if x < n { group_of[x] } else { internal + (x - n) };

    let mut edges: Vec<AxisEdge> = raw_edges
        .iter()
        .filter_map(|&(p, q, sides)| {
            let (a, b) = (node_ref(p), node_ref(q));
            (a != b).then_some(AxisEdge { a, b, sides })
        })
        .collect();

    // Largest maximal disk, ties to the smallest merged id.
    let root = (0..internal)
        .max_by(|&i, &j| merged[i].inradius.total_cmp(&merged[j].inradius).then(j.cmp(&i)))
        .unwrap_or(0);

    let total = internal + n;
    let mut adj_tmp: Vec<Vec<usize>> = vec![Vec::new(); total];
    for (e, ed) in edges.iter().enumerate() {
        adj_tmp[ed.a].push(e);
        adj_tmp[ed.b].push(e);
    }
    // Depth-first preorder over internal vertices for locality of the
    // decomposition walk.
    let mut order = vec![usize::MAX; total];
    let mut next_id = 0;
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        if order[v] != usize::MAX {
            continue;
        }
        order[v] = next_id;
        next_id += 1;
        for &e in adj_tmp[v].iter().rev() {
            let w = if edges[e].a == v { edges[e].b } else { edges[e].a };
            if w < internal && order[w] == usize::MAX {
                stack.push(w);
            }
        }
    }
    // Unreached internal vertices only arise from a broken skeleton; keep
    // them addressable so validation can report them.
    for slot in order.iter_mut().take(internal) {
        if *slot == usize::MAX {
            *slot = next_id;
            next_id += 1;
        }
    }
    for (i, slot) in order.iter_mut().enumerate().skip(internal) {
        *slot = i;
    }

    let mut vertices: Vec<MedialAxisVertex> = vec![
        MedialAxisVertex {
            center: Point::default(),
            inradius: 0.0,
            tangent_sides: Vec::new()
        };
        total
    ];
    for (old, v) in merged.into_iter().enumerate() {
        vertices[order[old]] = v;
    }
    for i in 0..n {
        vertices[internal + i] = MedialAxisVertex {
            center: Point::default(),
            inradius: 0.0,
            tangent_sides: {
                let mut s = vec![(i + n - 1) % n, i];
                s.sort_unstable();
                s
            },
        };
    }
    for e in edges.iter_mut() {
        e.a = order[e.a];
        e.b = order[e.b];
    }
    edges.sort_unstable_by_key(|e| (e.a.min(e.b), e.a.max(e.b)));

    let mut degree = vec![0usize; total + 1];
    for e in &edges {
        degree[e.a + 1] += 1;
        degree[e.b + 1] += 1;
    }
    for i in 0..total {
        degree[i + 1] += degree[i];
    }
    let adj_start = degree;
    let mut fill = adj_start.clone();
    let mut adj = vec![0usize; 2 * edges.len()];
    for (id, e) in edges.iter().enumerate() {
        adj[fill[e.a]] = id;
        fill[e.a] += 1;
        adj[fill[e.b]] = id;
        fill[e.b] += 1;
    }
    for v in 0..total {
        adj[adj_start[v]..adj_start[v + 1]].sort_unstable_by_key(|&e| edges[e].sides);
    }

    MedialAxis {
        n_sides: n,
        vertices,
        internal,
        edges,
        adj_start,
        adj,
    }
}

/// Internal vertex of maximum inradius, ties to the smallest id.
pub fn max_inscribed_vertex(axis: &MedialAxis) -> usize {
    let mut best = 0;
    for i in 1..axis.internal_count() {
        if axis.vertices[i].inradius > axis.vertices[best].inradius {
            best = i;
        }
    }
    best
}

/// Upper bound on axis hops taken by [`find_split_side`] before giving up.
const MAX_SPLIT_HOPS: usize = 64;

/// Smallest tangent side of `id` in the open cyclic range `(u, v)`.
fn first_tangent_in_range(axis: &MedialAxis, id: usize, u: usize, v: usize) -> Option<usize> {
    let n = axis.n_sides;
    let ts = &axis.vertices[id].tangent_sides;
    if ts.is_empty() {
        return None;
    }
    let span = (v + n - u) % n;
    let idx = ts.partition_point(|&s| s <= u);
    let t = if idx == ts.len() { ts[0] } else { ts[idx] };
    let off = (t + n - u) % n;
    (off > 0 && off < span).then_some(t)
}

/// Given an axis vertex `q` tangent to sides `u` and `v`, finds a side `t`
/// strictly inside the cyclic range `(u, v)` and an axis vertex `q'` tangent
/// to `u`, `t` and `v`. Either `q' = q` or `q'` is reached from `q` along
/// the edge on the bisector of `u` and `v`. Ties go to the smallest `t`
/// (cyclically after `u`).
pub fn find_split_side(axis: &MedialAxis, u: usize, v: usize, q: usize) -> Result<(usize, usize)> {
    let n = axis.n_sides;
    let (u, v) = (u % n, v % n);
    if (v + n - u) % n <= 1 {
        return Err(Error::EmptyRange { u, v });
    }
    let mut prev = usize::MAX;
    let mut cur = q;
    for _ in 0..MAX_SPLIT_HOPS {
        if let Some(t) = first_tangent_in_range(axis, cur, u, v) {
            return Ok((t, cur));
        }
        let next = axis
            .neighbor_on_bisector(cur, u, v)
            .filter(|&w| w != prev && !axis.is_leaf(w))
            .ok_or_else(|| {
                Error::Internal(format!(
                    "axis vertex {cur} has no edge on the bisector of sides {u} and {v}"
                ))
            })?;
        prev = cur;
        cur = next;
    }
    Err(Error::Internal(format!(
        "no split side for ({u}, {v}) within {MAX_SPLIT_HOPS} axis hops"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::validate_convex_polygon;

    fn poly(v: &[(f64, f64)]) -> ConvexPolygon {
        let p: Vec<Point> = v.iter().map(|&q| q.into()).collect();
        validate_convex_polygon(&p, Tolerance::default()).unwrap()
    }

    fn regular(n: usize) -> ConvexPolygon {
        let v: Vec<(f64, f64)> = (0..n)
            .map(|k| {
                let a = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                (a.cos(), a.sin())
            })
            .collect();
        poly(&v)
    }

    /// Every side line is at distance >= r from the center.
    fn assert_inscribed(p: &ConvexPolygon, axis: &MedialAxis) {
        for v in axis.internal_vertices() {
            for i in 0..p.n() {
                let (nrm, c) = p.side_halfplane(i);
                let d = nrm.dot(v.center) - c;
                assert!(d >= v.inradius - 1e-9 * v.inradius.max(1e-300), "side {i}");
                if v.tangent_sides.contains(&i) {
                    assert!((d - v.inradius).abs() <= 1e-9 * p.diameter());
                }
            }
        }
    }

    fn assert_tree(axis: &MedialAxis) {
        let total = axis.vertices().len();
        assert_eq!(axis.edges().len(), total - 1);
        let mut seen = vec![false; total];
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            if std::mem::replace(&mut seen[v], true) {
                continue;
            }
            stack.extend(axis.neighbors(v));
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn right_triangle_has_single_incenter() {
        let p = poly(&[(0.0, 0.0), (4.0, 0.0), (0.0, 3.0)]);
        let axis = compute_medial_axis(&p, Tolerance::default());
        assert_eq!(axis.internal_count(), 1);
        let v = axis.vertex(0);
        assert!(v.center.dist(Point::new(1.0, 1.0)) < 1e-12);
        assert!((v.inradius - 1.0).abs() < 1e-12);
        assert_eq!(v.tangent_sides, vec![0, 1, 2]);
        assert_tree(&axis);
    }

    #[test]
    fn square_merges_to_center() {
        let p = poly(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        let axis = compute_medial_axis(&p, Tolerance::default());
        assert_eq!(axis.internal_count(), 1);
        let c = axis.vertex(0);
        assert!(c.center.dist(Point::new(0.5, 0.5)) < 1e-12);
        assert!((c.inradius - 0.5).abs() < 1e-12);
        assert_eq!(c.tangent_sides, vec![0, 1, 2, 3]);
        assert_eq!(axis.edges().len(), 4);
        for (a, b) in axis.segments() {
            let corner = if a.dist(Point::new(0.5, 0.5)) < 1e-12 { b } else { a };
            assert!(p.vertices().contains(&corner));
        }
        assert_tree(&axis);
    }

    #[test]
    fn irregular_hexagon_has_four_generic_vertices() {
        let p = poly(&[(0.0, 0.0), (5.0, -0.4), (7.2, 1.5), (6.1, 4.0), (2.3, 4.6), (-0.9, 2.2)]);
        let axis = compute_medial_axis(&p, Tolerance::default());
        assert_eq!(axis.internal_count(), 4);
        for v in axis.internal_vertices() {
            assert_eq!(v.tangent_sides.len(), 3);
        }
        let internal_edges = axis
            .edges()
            .iter()
            .filter(|e| !axis.is_leaf(e.a) && !axis.is_leaf(e.b))
            .count();
        assert_eq!(internal_edges, 3);
        assert_inscribed(&p, &axis);
        assert_tree(&axis);
    }

    #[test]
    fn equilateral_triangle_incenter() {
        let h = 3f64.sqrt() / 2.0;
        let p = poly(&[(0.0, 0.0), (2.0, 0.0), (1.0, 2.0 * h)]);
        let axis = compute_medial_axis(&p, Tolerance::default());
        let q = max_inscribed_vertex(&axis);
        assert!((axis.vertex(q).inradius - 2.0 * 3f64.sqrt() / 6.0).abs() < 1e-12);
    }

    #[test]
    fn elongated_polygon_max_disk_matches_grid_search() {
        let p = poly(&[(0.0, 0.0), (6.0, -0.3), (9.0, 0.8), (8.2, 2.1), (3.0, 2.6), (-1.0, 1.4)]);
        let axis = compute_medial_axis(&p, Tolerance::default());
        let q = axis.vertex(max_inscribed_vertex(&axis));
        // Brute force: maximize the minimum distance to the side lines.
        let depth = |x: f64, y: f64| {
            (0..p.n())
                .map(|i| {
                    let (nrm, c) = p.side_halfplane(i);
                    nrm.dot(Point::new(x, y)) - c
                })
                .fold(f64::INFINITY, f64::min)
        };
        let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
        let steps = 600;
        for i in 0..=steps {
            for j in 0..=steps {
                let x = -1.0 + 10.0 * i as f64 / steps as f64;
                let y = -0.3 + 2.9 * j as f64 / steps as f64;
                let d = depth(x, y);
                if d > best.0 {
                    best = (d, x, y);
                }
            }
        }
        assert!(q.inradius >= best.0 - 1e-12);
        assert!(q.inradius - best.0 < 0.01);
        assert!((depth(q.center.x, q.center.y) - q.inradius).abs() < 1e-9);
    }

    #[test]
    fn regular_polygons_collapse_to_one_vertex() {
        for n in [5, 6, 8, 12, 37, 100] {
            let p = regular(n);
            let axis = compute_medial_axis(&p, Tolerance::default());
            assert_eq!(axis.internal_count(), 1, "n = {n}");
            assert_eq!(axis.vertex(0).tangent_sides, (0..n).collect::<Vec<_>>());
            assert_tree(&axis);
        }
    }

    #[test]
    fn split_side_square_and_hexagon() {
        let p = poly(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        let axis = compute_medial_axis(&p, Tolerance::default());
        assert_eq!(find_split_side(&axis, 2, 4, 0).unwrap(), (3, 0));
        assert_eq!(find_split_side(&axis, 2, 3, 0), Err(Error::EmptyRange { u: 2, v: 3 }));

        let hex = regular(6);
        let axis = compute_medial_axis(&hex, Tolerance::default());
        assert_eq!(find_split_side(&axis, 0, 3, 0).unwrap(), (1, 0));
    }

    #[test]
    fn split_side_walks_one_edge() {
        let p = poly(&[(0.0, 0.0), (5.0, -0.4), (7.2, 1.5), (6.1, 4.0), (2.3, 4.6), (-0.9, 2.2)]);
        let axis = compute_medial_axis(&p, Tolerance::default());
        let n = p.n();
        for q in 0..axis.internal_count() {
            let ts = axis.vertex(q).tangent_sides.clone();
            for &u in &ts {
                for &v in &ts {
                    if u == v || (v + n - u) % n <= 1 {
                        continue;
                    }
                    let (t, q2) = find_split_side(&axis, u, v, q).unwrap();
                    let off = (t + n - u) % n;
                    assert!(off > 0 && off < (v + n - u) % n);
                    assert!(axis.is_tangent(q2, u) && axis.is_tangent(q2, v) && axis.is_tangent(q2, t));
                    assert!(q2 == q || axis.neighbors(q).any(|w| w == q2));
                }
            }
        }
    }
}
