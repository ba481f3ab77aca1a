//! Side disks and their intersection graph.
//!
//! Vertices are side indices. Two construction paths exist: the quadratic
//! all-pairs oracle and the fast path that only tests pairs sharing a bag of
//! a tree decomposition.

use std::collections::HashSet;
use std::fmt::Write;

use rayon::prelude::*;

use crate::decomposition::TreeDecomposition;
use crate::error::{Error, Result};
use crate::geometry::{disks_intersect, ConvexPolygon, Disk, IntersectionMode, Tolerance};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionGraph {
    n: usize,
    /// Sorted, unique, `i < j`.
    edges: Vec<(usize, usize)>,
    mode: IntersectionMode,
}

impl IntersectionGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>, mode: IntersectionMode) -> Self {
        let mut edges: Vec<(usize, usize)> = edges
            .into_iter()
            .filter(|&(a, b)| a != b)
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        IntersectionGraph { n, edges, mode }
    }

    /// The cycle `0, 1, ..., n-1` plus the given chords.
    pub fn cycle_with_chords(n: usize, chords: &[(usize, usize)]) -> Self {
        let cycle = (0..n).map(|i| (i, (i + 1) % n));
        IntersectionGraph::new(n, cycle.chain(chords.iter().copied()), IntersectionMode::Closed)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn mode(&self) -> IntersectionMode {
        self.mode
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    /// Edges that are not on the cycle `0, 1, ..., n-1`.
    pub fn chords(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        self.edges
            .iter()
            .copied()
            .filter(|&(a, b)| b - a != 1 && !(a == 0 && b == n - 1))
            .collect()
    }

    /// Cycle pairs `{i, i+1}` that are not edges.
    pub fn missing_cycle_edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .map(|i| (i, (i + 1) % self.n))
            .filter(|&(a, b)| !self.has_edge(a, b))
            .collect()
    }

    pub fn adjacency(&self) -> Adjacency {
        Adjacency::new(self)
    }
}

/// Compressed neighbor lists.
#[derive(Debug, Clone)]
pub struct Adjacency {
    start: Vec<usize>,
    nbrs: Vec<usize>,
}

impl Adjacency {
    fn new(g: &IntersectionGraph) -> Self {
        let mut start = vec![0usize; g.n + 1];
        for &(a, b) in &g.edges {
            start[a + 1] += 1;
            start[b + 1] += 1;
        }
        for i in 0..g.n {
            start[i + 1] += start[i];
        }
        let mut fill = start.clone();
        let mut nbrs = vec![0usize; 2 * g.edges.len()];
        for &(a, b) in &g.edges {
            nbrs[fill[a]] = b;
            fill[a] += 1;
            nbrs[fill[b]] = a;
            fill[b] += 1;
        }
        for v in 0..g.n {
            nbrs[start[v]..start[v + 1]].sort_unstable();
        }
        Adjacency { start, nbrs }
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.nbrs[self.start[v]..self.start[v + 1]]
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.neighbors(a).binary_search(&b).is_ok()
    }
}

pub fn side_disks(poly: &ConvexPolygon) -> Vec<Disk> {
    (0..poly.n()).map(|i| poly.side_disk(i)).collect()
}

const PARALLEL_ORACLE_MIN: usize = 512;

/// All-pairs intersection graph.
pub fn graph_bruteforce(poly: &ConvexPolygon, mode: IntersectionMode, tol: Tolerance) -> IntersectionGraph {
    let disks = side_disks(poly);
    let n = disks.len();
    let row = |i: usize| -> Vec<(usize, usize)> {
        (i + 1..n)
            .filter(|&j| disks_intersect(&disks[i], &disks[j], mode, tol))
            .map(|j| (i, j))
            .collect()
    };
    let edges: Vec<(usize, usize)> = if n >= PARALLEL_ORACLE_MIN {
        (0..n).into_par_iter().flat_map_iter(row).collect()
    } else {
        (0..n).flat_map(row).collect()
    };
    IntersectionGraph { n, edges, mode }
}

/// Tests only pairs that share a bag; `T` must decompose the graph for the
/// result to be complete.
pub fn graph_from_decomposition(
    poly: &ConvexPolygon,
    td: &TreeDecomposition,
    mode: IntersectionMode,
    tol: Tolerance,
) -> IntersectionGraph {
    let n = poly.n();
    let mut seen: HashSet<(usize, usize)> = HashSet::with_capacity(3 * n);
    let mut edges = Vec::with_capacity(3 * n);
    for bag in td.bags() {
        let s = &bag.sides;
        for x in 0..s.len() {
            for y in x + 1..s.len() {
                let key = (s[x].min(s[y]), s[x].max(s[y]));
                if seen.insert(key) && disks_intersect(&poly.side_disk(key.0), &poly.side_disk(key.1), mode, tol) {
                    edges.push(key);
                }
            }
        }
    }
    edges.sort_unstable();
    IntersectionGraph { n, edges, mode }
}

/// Whether a rotation or reflection of the labels `0..n` maps the edges of
/// `g` onto the edges of `h`.
pub fn dihedral_isomorphic(g: &IntersectionGraph, h: &IntersectionGraph) -> Result<bool> {
    Ok(dihedral_map(g, h)?.is_some())
}

/// The symmetry found by [`dihedral_isomorphic`], as `(rotation, reflected)`:
/// label `i` of `g` maps to `(rotation ± i) mod n`.
pub fn dihedral_map(g: &IntersectionGraph, h: &IntersectionGraph) -> Result<Option<(usize, bool)>> {
    if g.n != h.n {
        return Err(Error::SizeMismatch(g.n, h.n));
    }
    if g.edge_count() != h.edge_count() {
        return Ok(None);
    }
    let n = g.n;
    if n == 0 {
        return Ok(Some((0, false)));
    }
    for reflected in [false, true] {
        for rot in 0..n {
            let map = |i: usize| {
                if reflected {
                    (rot + n - i) % n
                } else {
                    (rot + i) % n
                }
            };
            if g.edges.iter().all(|&(a, b)| h.has_edge(map(a), map(b))) {
                return Ok(Some((rot, reflected)));
            }
        }
    }
    Ok(None)
}

/// Planar graphs on `n >= 3` vertices have at most `3n - 6` edges.
pub fn check_edge_bound(g: &IntersectionGraph) -> bool {
    g.n < 3 || g.edge_count() <= 3 * g.n - 6
}

/// One `i j` line per edge, `i < j`, sorted.
pub fn to_edge_list(g: &IntersectionGraph) -> String {
    let mut out = String::with_capacity(8 * g.edge_count());
    for &(a, b) in &g.edges {
        let _ = writeln!(out, "{a} {b}");
    }
    out
}

pub fn to_dot(g: &IntersectionGraph) -> String {
    let mut out = String::from("graph G {\n");
    for v in 0..g.n {
        let _ = writeln!(out, "  {v};");
    }
    for &(a, b) in &g.edges {
        let _ = writeln!(out, "  {a} -- {b};");
    }
    out.push_str("}\n");
    out
}
