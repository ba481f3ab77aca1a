//! Width-3 tree decompositions of side-disk graphs, guided by the medial
//! axis, and a validator for arbitrary decompositions.
//!
//! Side ranges are cyclic: the call `(u, v, z)` covers sides `u, u+1, ..., v`
//! taken modulo `n`, and `z` lies outside that range. Bags are reported in
//! the polygon's own labels.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{equal_distance_line, line_meets_segment_within, ConvexPolygon, Tolerance};
use crate::graph::IntersectionGraph;
use crate::medial_axis::{find_split_side, max_inscribed_vertex, MedialAxis};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bag {
    pub id: usize,
    /// Sorted and unique.
    pub sides: Vec<usize>,
    pub parent: Option<usize>,
}

impl Bag {
    pub fn contains(&self, side: usize) -> bool {
        self.sides.binary_search(&side).is_ok()
    }
}

/// Rooted tree of bags. Bag `i` is stored at index `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<Bag>,
    root: usize,
}

impl TreeDecomposition {
    /// Checks that ids are `0..len`, parent links form a single rooted tree,
    /// and normalizes every bag to a sorted set.
    pub fn from_bags(mut bags: Vec<Bag>) -> Result<Self> {
        if bags.is_empty() {
            return Err(Error::InvalidDecomposition("no bags".into()));
        }
        bags.sort_by_key(|b| b.id);
        let len = bags.len();
        let mut root = None;
        for (i, b) in bags.iter_mut().enumerate() {
            if b.id != i {
                return Err(Error::InvalidDecomposition(format!(
                    "bag ids must be 0..{len}, found {}",
                    b.id
                )));
            }
            b.sides.sort_unstable();
            b.sides.dedup();
            match b.parent {
                None if root.is_some() => return Err(Error::InvalidDecomposition("more than one root".into())),
                None => root = Some(i),
                Some(p) if p >= len || p == i => {
                    return Err(Error::InvalidDecomposition(format!("bag {i} has invalid parent {p}")))
                }
                Some(_) => {}
            }
        }
        let root = root.ok_or_else(|| Error::InvalidDecomposition("no root".into()))?;
        // Every bag must reach the root; memoize to stay linear.
        let mut state = vec![0u8; len]; // 0 unknown, 1 on current path, 2 reaches root
        state[root] = 2;
        let mut path = Vec::new();
        for start in 0..len {
            let mut cur = start;
            while state[cur] == 0 {
                state[cur] = 1;
                path.push(cur);
                cur = bags[cur].parent.expect("non-root has parent");
            }
            if state[cur] == 1 {
                return Err(Error::InvalidDecomposition(format!(
                    "parent links cycle through bag {cur}"
                )));
            }
            for v in path.drain(..) {
                state[v] = 2;
            }
        }
        Ok(TreeDecomposition { bags, root })
    }

    pub fn bags(&self) -> &[Bag] {
        &self.bags
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    /// Largest side index mentioned plus one.
    pub fn index_bound(&self) -> usize {
        self.bags
            .iter()
            .flat_map(|b| b.sides.iter())
            .map(|&s| s + 1)
            .max()
            .unwrap_or(0)
    }

    /// Child lists in id order.
    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.bags.len()];
        for b in &self.bags {
            if let Some(p) = b.parent {
                ch[p].push(b.id);
            }
        }
        ch
    }
}

/// Maximum bag size minus one.
pub fn width(td: &TreeDecomposition) -> usize {
    td.bags
        .iter()
        .map(|b| b.sides.len())
        .max()
        .unwrap_or(1)
        .saturating_sub(1)
}

/// Parameters of one recursive call: the cyclic side range `u..=v`, the
/// outside side `z`, and an internal medial-axis vertex `q` tangent to `u`
/// and `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeCall {
    pub u: usize,
    pub v: usize,
    pub z: usize,
    pub q: usize,
}

impl RangeCall {
    /// Number of sides strictly inside the range.
    pub fn interior_len(&self, n: usize) -> usize {
        ((self.v + n - self.u) % n).saturating_sub(1)
    }

    /// Sides strictly inside the range.
    pub fn interior(&self, n: usize) -> impl Iterator<Item = usize> {
        let u = self.u;
        (1..=self.interior_len(n)).map(move |k| (u + k) % n)
    }

    /// Whether `s` lies in the closed range `u..=v`.
    pub fn covers(&self, n: usize, s: usize) -> bool {
        (s + n - self.u) % n <= (self.v + n - self.u) % n
    }
}

/// What happened during a build.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BuildTrace {
    /// Every call, in the order its bag was created, with its bag id and
    /// split side (`None` for leaves).
    pub calls: Vec<(RangeCall, usize, Option<usize>)>,
    pub split_calls: usize,
    pub bisector_tests: usize,
    /// Calls whose third parameter was decided by an endpoint graze.
    pub ambiguous: Vec<RangeCall>,
}

/// Picks three tangent sides of `tangent` (sorted, length >= 3) minimizing
/// the largest cyclic gap, ties to the lexicographically smallest triple.
fn balanced_triple(tangent: &[usize], n: usize) -> [usize; 3] {
    const EXACT_LIMIT: usize = 512;
    let k = tangent.len();
    if k == 3 {
        return [tangent[0], tangent[1], tangent[2]];
    }
    if k > EXACT_LIMIT {
        let pick = |target: usize, lo: usize| tangent.partition_point(|&s| s < target).clamp(lo, k - 1);
        let a = 0;
        let b = pick(tangent[0] + n / 3, 1).min(k - 2);
        let c = pick(tangent[0] + 2 * n / 3, b + 1);
        return [tangent[a], tangent[b], tangent[c]];
    }
    let mut best: Option<(usize, [usize; 3])> = None;
    for ai in 0..k {
        let a = tangent[ai];
        for bi in ai + 1..k - 1 {
            let b = tangent[bi];
            let g1 = b - a;
            // Best inner value over c in tangent[bi+1..]: max(c - b, n - c + a).
            let tail = &tangent[bi + 1..];
            let mid = (b + n + a) / 2;
            let j = tail.partition_point(|&c| c < mid);
            let mut inner = usize::MAX;
            for &c in tail[j.saturating_sub(1)..(j + 1).min(tail.len())].iter() {
                inner = inner.min((c - b).max(n - c + a));
            }
            let m = g1.max(inner);
            if best.is_some_and(|(bm, _)| bm <= m) {
                continue;
            }
            // Smallest c with c - b <= m and n - c + a <= m.
            let lo = (n + a).saturating_sub(m).max(b + 1);
            let c = tail[tail.partition_point(|&c| c < lo)];
            best = Some((m, [a, b, c]));
        }
    }
    best.expect("at least three tangent sides").1
}

/// Decomposition with the root bag built from the largest inscribed disk.
pub fn build_tree_decomposition(poly: &ConvexPolygon, axis: &MedialAxis, tol: Tolerance) -> Result<TreeDecomposition> {
    build(poly, axis, tol, None)
}

pub fn build_tree_decomposition_traced(
    poly: &ConvexPolygon,
    axis: &MedialAxis,
    tol: Tolerance,
) -> Result<(TreeDecomposition, BuildTrace)> {
    let mut trace = BuildTrace::default();
    let td = build(poly, axis, tol, Some(&mut trace))?;
    Ok((td, trace))
}

/// Rooted decomposition of the disks in `call.u..=call.v` plus `call.z`,
/// whose root bag contains `u`, `v` and `z`.
pub fn f_recurse(
    poly: &ConvexPolygon,
    axis: &MedialAxis,
    call: RangeCall,
    tol: Tolerance,
) -> Result<TreeDecomposition> {
    let n = poly.n();
    if call.u >= n || call.v >= n || call.z >= n {
        return Err(Error::PreconditionFailed(format!(
            "call {call:?} has an index outside 0..{n}"
        )));
    }
    if call.u == call.v || call.covers(n, call.z) {
        return Err(Error::PreconditionFailed(format!(
            "side {} lies inside the range of {call:?}",
            call.z
        )));
    }
    if !axis.is_tangent(call.q, call.u) || !axis.is_tangent(call.q, call.v) {
        return Err(Error::PreconditionFailed(format!(
            "axis vertex {} is not tangent to both ends",
            call.q
        )));
    }
    let mut bags = Vec::new();
    expand(poly, axis, tol, vec![(call, None)], &mut bags, None)?;
    TreeDecomposition::from_bags(bags)
}

fn build(
    poly: &ConvexPolygon,
    axis: &MedialAxis,
    tol: Tolerance,
    trace: Option<&mut BuildTrace>,
) -> Result<TreeDecomposition> {
    let n = poly.n();
    if axis.side_count() != n {
        return Err(Error::SizeMismatch(axis.side_count(), n));
    }
    let q0 = max_inscribed_vertex(axis);
    let tangent = &axis.vertex(q0).tangent_sides;
    if tangent.len() < 3 {
        return Err(Error::Internal(format!(
            "largest axis vertex touches only {} sides",
            tangent.len()
        )));
    }
    let [a, b, c] = balanced_triple(tangent, n);
    let mut bags = vec![Bag {
        id: 0,
        sides: sorted(&[a, b, c]),
        parent: None,
    }];
    let mut stack = Vec::with_capacity(3);
    // Pushed in reverse so children come out in the order (a,b), (b,c), (c,a).
    if a + n - c > 1 {
        stack.push((
            RangeCall {
                u: c,
                v: a,
                z: b,
                q: q0,
            },
            Some(0),
        ));
    }
    if c - b > 1 {
        stack.push((
            RangeCall {
                u: b,
                v: c,
                z: a,
                q: q0,
            },
            Some(0),
        ));
    }
    if b - a > 1 {
        stack.push((
            RangeCall {
                u: a,
                v: b,
                z: c,
                q: q0,
            },
            Some(0),
        ));
    }
    expand(poly, axis, tol, stack, &mut bags, trace)?;
    TreeDecomposition::from_bags(bags)
}

fn sorted(s: &[usize]) -> Vec<usize> {
    let mut v = s.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Whether the interior bisector of sides `a` and `b` meets side `z`.
fn bisector_meets(poly: &ConvexPolygon, a: usize, b: usize, z: usize, tol: Tolerance) -> Result<(bool, bool)> {
    let (na, ca) = poly.side_halfplane(a);
    let (nb, cb) = poly.side_halfplane(b);
    let line = equal_distance_line(na, ca, nb, cb)
        .ok_or_else(|| Error::Internal(format!("sides {a} and {b} have identical supporting lines")))?;
    // Slack relative to the smallest feature involved, so tiny sides next
    // to long ones are not swallowed by the tolerance.
    let scale = poly
        .side(a)
        .length()
        .min(poly.side(b).length())
        .min(poly.side(z).length());
    Ok(line_meets_segment_within(&line, &poly.side(z), tol.eps * scale))
}

/// Runs the recursion from the pending calls, appending bags in preorder.
fn expand(
    poly: &ConvexPolygon,
    axis: &MedialAxis,
    tol: Tolerance,
    mut stack: Vec<(RangeCall, Option<usize>)>,
    bags: &mut Vec<Bag>,
    mut trace: Option<&mut BuildTrace>,
) -> Result<()> {
    let n = poly.n();
    while let Some((call, parent)) = stack.pop() {
        let RangeCall { u, v, z, q } = call;
        let id = bags.len();
        let span = (v + n - u) % n;
        if span <= 1 {
            bags.push(Bag {
                id,
                sides: sorted(&[u, v, z]),
                parent,
            });
            if let Some(tr) = trace.as_deref_mut() {
                tr.calls.push((call, id, None));
            }
            continue;
        }
        let (t, q1) = find_split_side(axis, u, v, q)?;
        bags.push(Bag {
            id,
            sides: sorted(&[u, v, z, t]),
            parent,
        });
        let off_t = (t + n - u) % n;
        let mut ambiguous = false;
        let mut tests = 0;
        let mut children = [None, None];
        if off_t > 1 {
            let (hit, amb) = bisector_meets(poly, u, t, z, tol)?;
            tests += 1;
            ambiguous |= amb;
            children[0] = Some(RangeCall {
                u,
                v: t,
                z: if hit { z } else { v },
                q: q1,
            });
        }
        if span - off_t > 1 {
            let (hit, amb) = bisector_meets(poly, t, v, z, tol)?;
            tests += 1;
            ambiguous |= amb;
            children[1] = Some(RangeCall {
                u: t,
                v,
                z: if hit { z } else { u },
                q: q1,
            });
        }
        if let Some(tr) = trace.as_deref_mut() {
            tr.calls.push((call, id, Some(t)));
            tr.split_calls += 1;
            tr.bisector_tests += tests;
            if ambiguous {
                tr.ambiguous.push(call);
            }
        }
        for child in children.into_iter().rev().flatten() {
            stack.push((child, Some(id)));
        }
    }
    Ok(())
}

/// Result of checking one decomposition property.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PropertyCheck<W> {
    pub passed: bool,
    pub witnesses: Vec<W>,
}

impl<W> PropertyCheck<W> {
    fn from_witnesses(witnesses: Vec<W>) -> Self {
        PropertyCheck {
            passed: witnesses.is_empty(),
            witnesses,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    /// Vertices contained in no bag.
    pub vertex_coverage: PropertyCheck<usize>,
    /// Edges contained in no bag.
    pub edge_coverage: PropertyCheck<(usize, usize)>,
    /// Vertices whose bags do not form a connected subtree.
    pub connectivity: PropertyCheck<usize>,
    /// Bag entries outside `0..n`, as `(bag, side)`.
    pub out_of_range: Vec<(usize, usize)>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.vertex_coverage.passed
            && self.edge_coverage.passed
            && self.connectivity.passed
            && self.out_of_range.is_empty()
    }

    pub fn counterexample_count(&self) -> usize {
        self.vertex_coverage.witnesses.len()
            + self.edge_coverage.witnesses.len()
            + self.connectivity.witnesses.len()
            + self.out_of_range.len()
    }
}

/// Checks the three tree-decomposition properties in linear time.
pub fn validate_decomposition(g: &IntersectionGraph, td: &TreeDecomposition) -> ValidationReport {
    let n = g.n();
    let mut count = vec![0usize; n];
    let mut out_of_range = Vec::new();
    let mut pairs: HashSet<(usize, usize)> = HashSet::with_capacity(6 * td.len());
    for bag in td.bags() {
        for (x, &s) in bag.sides.iter().enumerate() {
            if s >= n {
                out_of_range.push((bag.id, s));
                continue;
            }
            count[s] += 1;
            for &r in &bag.sides[x + 1..] {
                pairs.insert((s, r));
            }
        }
    }
    // Occurrences of v form a subtree iff they are joined by exactly
    // count[v] - 1 tree edges.
    let mut joined = vec![0usize; n];
    for bag in td.bags() {
        if let Some(p) = bag.parent {
            let parent = &td.bags()[p];
            for &s in &bag.sides {
                if s < n && parent.contains(s) {
                    joined[s] += 1;
                }
            }
        }
    }
    let uncovered: Vec<usize> = (0..n).filter(|&v| count[v] == 0).collect();
    let disconnected: Vec<usize> = (0..n).filter(|&v| count[v] > 0 && joined[v] + 1 != count[v]).collect();
    let missing: Vec<(usize, usize)> = g.edges().iter().copied().filter(|e| !pairs.contains(e)).collect();
    ValidationReport {
        vertex_coverage: PropertyCheck::from_witnesses(uncovered),
        edge_coverage: PropertyCheck::from_witnesses(missing),
        connectivity: PropertyCheck::from_witnesses(disconnected),
        out_of_range,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{validate_convex_polygon, IntersectionMode, Point};
    use crate::graph::graph_bruteforce;
    use crate::medial_axis::compute_medial_axis;

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

    fn build_checked(p: &ConvexPolygon) -> (TreeDecomposition, BuildTrace) {
        let t = Tolerance::default();
        let axis = compute_medial_axis(p, t);
        let (td, trace) = build_tree_decomposition_traced(p, &axis, t).unwrap();
        let g = graph_bruteforce(p, IntersectionMode::Closed, t);
        let rep = validate_decomposition(&g, &td);
        assert!(rep.passed(), "{rep:?}");
        assert!(width(&td) <= 3);
        (td, trace)
    }

    fn bag(id: usize, sides: &[usize], parent: Option<usize>) -> Bag {
        Bag {
            id,
            sides: sides.to_vec(),
            parent,
        }
    }

    #[test]
    fn triangle_is_one_bag() {
        let (td, _) = build_checked(&poly(&[(0.0, 0.0), (3.0, 0.4), (1.0, 2.0)]));
        assert_eq!(td.bags(), &[bag(0, &[0, 1, 2], None)]);
        assert_eq!(width(&td), 2);
    }

    #[test]
    fn square_has_two_bags() {
        let (td, trace) = build_checked(&poly(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]));
        assert_eq!(td.bags(), &[bag(0, &[0, 1, 2], None), bag(1, &[0, 1, 2, 3], Some(0))]);
        assert_eq!(width(&td), 3);
        assert_eq!(trace.calls[0].0, RangeCall { u: 2, v: 0, z: 1, q: 0 });
        assert_eq!(trace.calls[0].2, Some(3));
    }

    #[test]
    fn square_call_from_side_two() {
        let p = poly(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        let t = Tolerance::default();
        let axis = compute_medial_axis(&p, t);
        let td = f_recurse(&p, &axis, RangeCall { u: 2, v: 0, z: 1, q: 0 }, t).unwrap();
        assert_eq!(td.bags(), &[bag(0, &[0, 1, 2, 3], None)]);
        let leaf = f_recurse(&p, &axis, RangeCall { u: 2, v: 3, z: 0, q: 0 }, t).unwrap();
        assert_eq!(leaf.bags(), &[bag(0, &[0, 2, 3], None)]);
        assert!(f_recurse(&p, &axis, RangeCall { u: 0, v: 2, z: 1, q: 0 }, t).is_err());
    }

    #[test]
    fn seven_gon_call_tree() {
        // Lines n_i . p = d_i; the unit circle touches sides 0, 2 and 5 only.
        let deg = [-90.0f64, -30.0, 20.0, 70.0, 120.0, 170.0, 220.0];
        let d = [1.0, 1.15, 1.0, 1.15, 1.15, 1.0, 1.15];
        let line = |i: usize| {
            let a = deg[i].to_radians();
            (a.cos(), a.sin(), d[i])
        };
        let v: Vec<(f64, f64)> = (0..7)
            .map(|i| {
                let (a1, b1, c1) = line((i + 6) % 7);
                let (a2, b2, c2) = line(i);
                let det = a1 * b2 - a2 * b1;
                ((c1 * b2 - c2 * b1) / det, (a1 * c2 - a2 * c1) / det)
            })
            .collect();
        let p = poly(&v);
        let (td, trace) = build_checked(&p);
        assert_eq!(td.len(), 5);
        assert_eq!(td.bags()[0].sides, vec![0, 2, 5]);
        for (call, _, _) in &trace.calls {
            assert!(!call.covers(7, call.z));
        }
        let calls: Vec<(usize, usize, usize)> = trace.calls.iter().map(|(c, _, _)| (c.u, c.v, c.z)).collect();
        assert_eq!(calls, vec![(0, 2, 5), (2, 5, 0), (3, 5, 0), (5, 0, 2)]);
    }

    #[test]
    fn octagon_call() {
        let p = regular(8);
        let t = Tolerance::default();
        let axis = compute_medial_axis(&p, t);
        let call = RangeCall { u: 0, v: 4, z: 6, q: 0 };
        let td = f_recurse(&p, &axis, call, t).unwrap();
        // Ties go to the first side after u.
        assert_eq!(td.bags()[0].sides, vec![0, 1, 4, 6]);
        assert!(width(&td) <= 3);
        // Sides inside 0..=4 meet nothing outside except z.
        let g = graph_bruteforce(&p, IntersectionMode::Closed, t);
        let sub = IntersectionGraph::new(
            8,
            g.edges().iter().copied().filter(|&(a, b)| {
                let inside = |s: usize| s <= 4 || s == 6;
                inside(a) && inside(b)
            }),
            IntersectionMode::Closed,
        );
        let rep = validate_decomposition(&sub, &td);
        assert!(rep.edge_coverage.passed && rep.connectivity.passed, "{rep:?}");
    }

    #[test]
    fn regular_polygons_balance_the_root() {
        for n in [5, 6, 8, 12, 37, 100] {
            let (td, _) = build_checked(&regular(n));
            assert_eq!(td.len(), n - 2);
        }
        assert_eq!(balanced_triple(&(0..12).collect::<Vec<_>>(), 12), [0, 4, 8]);
        // [0, 2, 6] and [0, 3, 6] both have largest gap 4.
        assert_eq!(balanced_triple(&(0..10).collect::<Vec<_>>(), 10), [0, 2, 6]);
        assert_eq!(balanced_triple(&[1, 2, 3, 7], 9), [1, 3, 7]);
    }

    #[test]
    fn validator_flags_missing_bag() {
        let p = poly(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        let g = graph_bruteforce(&p, IntersectionMode::Closed, Tolerance::default());
        let td = TreeDecomposition::from_bags(vec![bag(0, &[0, 1, 2], None)]).unwrap();
        let rep = validate_decomposition(&g, &td);
        assert_eq!(rep.vertex_coverage.witnesses, vec![3]);
        assert_eq!(rep.edge_coverage.witnesses, vec![(0, 3), (1, 3), (2, 3)]);
        assert!(!rep.passed());
    }

    #[test]
    fn validator_flags_split_occurrence() {
        let g = IntersectionGraph::cycle_with_chords(6, &[]);
        let td = TreeDecomposition::from_bags(vec![
            bag(0, &[0, 1, 5], None),
            bag(1, &[1, 2, 3, 0], Some(0)),
            bag(2, &[3, 4, 5], Some(1)),
        ])
        .unwrap();
        let rep = validate_decomposition(&g, &td);
        assert_eq!(rep.connectivity.witnesses, vec![5]);
        assert!(rep.vertex_coverage.passed && rep.edge_coverage.passed);
    }

    #[test]
    fn malformed_trees_are_rejected() {
        assert!(TreeDecomposition::from_bags(vec![]).is_err());
        assert!(TreeDecomposition::from_bags(vec![bag(0, &[0], None), bag(1, &[1], None)]).is_err());
        assert!(
            TreeDecomposition::from_bags(vec![bag(0, &[0], None), bag(1, &[1], Some(2)), bag(2, &[2], Some(1))])
                .is_err()
        );
    }
}
