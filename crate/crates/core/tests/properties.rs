use std::f64::consts::PI;

use proptest::prelude::*;

use sidedisk::constructions::{c4_probe, midpoint_inequality, random_convex_polygon, random_quadrilateral};
use sidedisk::decomposition::{
    build_tree_decomposition, build_tree_decomposition_traced, validate_decomposition, width,
};
use sidedisk::geometry::{disk_from_segment, disks_intersect, interior_angle, validate_convex_polygon, Segment};
use sidedisk::graph::{
    check_edge_bound, dihedral_isomorphic, graph_bruteforce, graph_from_decomposition, IntersectionGraph,
};
use sidedisk::io;
use sidedisk::medial_axis::compute_medial_axis;
use sidedisk::mis::{mis_bruteforce, mis_dp};
use sidedisk::realizer::{check_good, leg_separation, outerplanar_inputs, realize};
use sidedisk::{ConvexPolygon, Disk, IntersectionMode, Point, Tolerance};

const MODES: [IntersectionMode; 2] = [IntersectionMode::Closed, IntersectionMode::Open];

fn tol() -> Tolerance {
    Tolerance::default()
}

fn polygon(n: usize, seed: u64) -> ConvexPolygon {
    random_convex_polygon(n, seed).expect("random polygon")
}

fn disk() -> impl Strategy<Value = Disk> {
    (-5.0..5.0f64, -5.0..5.0f64, 0.01..3.0f64).prop_map(|(x, y, r)| Disk::new(Point::new(x, y), r))
}

/// Exact independence number by enumerating all vertex subsets.
fn alpha_by_subsets(g: &IntersectionGraph) -> usize {
    let n = g.n();
    let mut adj = vec![0u32; n];
    for &(a, b) in g.edges() {
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    (0u32..1 << n)
        .filter(|&s| (0..n).all(|v| s & (1 << v) == 0 || adj[v] & s == 0))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Image of `g` under `i -> (sign * i + shift) mod n`.
fn dihedral_image(g: &IntersectionGraph, shift: usize, reflect: bool) -> IntersectionGraph {
    let n = g.n();
    let map = |i: usize| if reflect { (shift + n - i) % n } else { (i + shift) % n };
    IntersectionGraph::new(n, g.edges().iter().map(|&(a, b)| (map(a), map(b))), g.mode())
}

fn in_range(s: usize, u: usize, v: usize, n: usize) -> bool {
    (s + n - u) % n <= (v + n - u) % n
}

proptest! {
    #[test]
    fn intersection_is_symmetric_and_open_implies_closed(a in disk(), b in disk()) {
        for mode in MODES {
            prop_assert_eq!(disks_intersect(&a, &b, mode, tol()), disks_intersect(&b, &a, mode, tol()));
        }
        if disks_intersect(&a, &b, IntersectionMode::Open, tol()) {
            prop_assert!(disks_intersect(&a, &b, IntersectionMode::Closed, tol()));
        }
    }

    #[test]
    fn side_disk_has_endpoints_on_boundary(ax in -100.0..100.0f64, ay in -100.0..100.0f64, dx in -50.0..50.0f64, dy in -50.0..50.0f64) {
        prop_assume!(dx.hypot(dy) > 1e-3);
        let (a, b) = (Point::new(ax, ay), Point::new(ax + dx, ay + dy));
        let d = disk_from_segment(Segment::new(a, b)).unwrap();
        for p in [a, b] {
            prop_assert!((d.center.dist(p) - d.radius).abs() <= 1e-9 * d.radius.max(1.0));
        }
    }

    #[test]
    fn convexity_check_matches_turn_signs(pts in prop::collection::vec((-6i32..=6, -6i32..=6), 3..8)) {
        let p: Vec<Point> = pts.iter().map(|&(x, y)| Point::new(x as f64, y as f64)).collect();
        let n = p.len();
        let area2: i64 = (0..n).map(|i| {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            a.0 as i64 * b.1 as i64 - b.0 as i64 * a.1 as i64
        }).sum();
        let mut q = pts.clone();
        if area2 < 0 {
            q.reverse();
        }
        let cross = |i: usize| {
            let (a, b, c) = (q[i], q[(i + 1) % n], q[(i + 2) % n]);
            ((b.0 - a.0) * (c.1 - b.1) - (b.1 - a.1) * (c.0 - b.0)) as i64
        };
        // All left turns with total turning 2*pi (winding number one).
        let turning: f64 = (0..n).map(|i| {
            let (a, b, c) = (q[i], q[(i + 1) % n], q[(i + 2) % n]);
            let (u, v) = ((b.0 - a.0) as f64, (b.1 - a.1) as f64);
            let (s, t) = ((c.0 - b.0) as f64, (c.1 - b.1) as f64);
            (u * t - v * s).atan2(u * s + v * t)
        }).sum();
        let expected = (0..n).all(|i| cross(i) > 0) && (turning - 2.0 * PI).abs() < 1e-6;
        prop_assert_eq!(validate_convex_polygon(&p, tol()).is_ok(), expected);
    }

    #[test]
    fn angle_sum(n in 3usize..60, seed in any::<u64>()) {
        let p = polygon(n, seed);
        let sum: f64 = (0..n).map(|i| interior_angle(&p, i)).sum();
        prop_assert!((sum - (n as f64 - 2.0) * PI).abs() <= 1e-9 * n as f64);
    }

    #[test]
    fn serialization_round_trips(n in 3usize..80, seed in any::<u64>()) {
        let p = polygon(n, seed);
        prop_assert_eq!(&io::polygon_from_json(&io::polygon_to_json(&p), tol()).unwrap(), &p);
        let g = graph_bruteforce(&p, IntersectionMode::Closed, tol());
        prop_assert_eq!(&io::graph_from_json(&io::graph_to_json(&g)).unwrap(), &g);
        let td = build_tree_decomposition(&p, &compute_medial_axis(&p, tol()), tol()).unwrap();
        prop_assert_eq!(&io::decomposition_from_json(&io::decomposition_to_json(&td)).unwrap(), &td);
    }

    #[test]
    fn quadrilaterals_have_an_intersecting_opposite_pair(seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let q = random_quadrilateral(&mut rng, tol());
        prop_assert!(c4_probe(&q, tol()).unwrap());
        prop_assert!(midpoint_inequality(&q, tol()).unwrap());
    }

    #[test]
    fn legs_are_separated(beta in PI / 3.0..PI, k in 2usize..=10, leg in 0.1..10.0f64, ext in 0.05..3.0f64, turn in 0.0..2.0 * PI) {
        let b = Point::new(1.0, -2.0);
        let dir = |t: f64| Point::new(t.cos(), t.sin());
        let (ua, uc) = (dir(turn + beta / 2.0), dir(turn - beta / 2.0));
        let r = leg_separation(b + ua * leg, b, b + uc * leg, b + ua * (leg * (1.0 + ext)), b + uc * (leg * (1.0 + ext)), k, tol()).unwrap();
        prop_assert!(r.all_disjoint());
        prop_assert!(r.min_ratio() >= 1.5 - 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn medial_axis_disks_are_inscribed(n in 3usize..120, seed in any::<u64>()) {
        let p = polygon(n, seed);
        let axis = compute_medial_axis(&p, tol());
        prop_assert!(axis.internal_count() <= n - 2);
        let scale = p.diameter();
        for v in axis.internal_vertices() {
            for i in 0..n {
                let (nrm, c) = p.side_halfplane(i);
                let d = nrm.dot(v.center) - c;
                prop_assert!(d >= v.inradius - 1e-9 * scale);
                if v.tangent_sides.contains(&i) {
                    prop_assert!((d - v.inradius).abs() <= 1e-9 * scale);
                }
            }
        }
    }

    #[test]
    fn decomposition_is_valid(n in 3usize..150, seed in any::<u64>()) {
        let p = polygon(n, seed);
        let axis = compute_medial_axis(&p, tol());
        let (td, trace) = build_tree_decomposition_traced(&p, &axis, tol()).unwrap();
        prop_assert!(width(&td) <= 3);
        prop_assert_eq!(td.len(), if n == 3 { 1 } else { n - 2 });
        prop_assert!(trace.split_calls <= n);
        prop_assert!(trace.bisector_tests <= 2 * n);
        for mode in MODES {
            let g = graph_bruteforce(&p, mode, tol());
            let report = validate_decomposition(&g, &td);
            prop_assert!(report.passed(), "{:?}", report);
        }
    }

    #[test]
    fn split_ranges_are_independent_and_shielded(n in 4usize..60, seed in any::<u64>()) {
        let p = polygon(n, seed);
        let g = graph_bruteforce(&p, IntersectionMode::Closed, tol());
        let axis = compute_medial_axis(&p, tol());
        let (_, trace) = build_tree_decomposition_traced(&p, &axis, tol()).unwrap();
        for (call, _, split) in &trace.calls {
            let (u, v, z) = (call.u, call.v, call.z);
            let inner: Vec<usize> = (0..n).filter(|&s| s != u && s != v && in_range(s, u, v, n)).collect();
            // Only disks of the range and D_z reach the interior of the range.
            for &s in &inner {
                for o in (0..n).filter(|&o| o != z && !in_range(o, u, v, n)) {
                    prop_assert!(!g.has_edge(s.min(o), s.max(o)), "call {:?}: {} meets {}", call, s, o);
                }
            }
            if let Some(t) = *split {
                let left: Vec<usize> = inner.iter().copied().filter(|&s| s != t && in_range(s, u, t, n)).collect();
                let right: Vec<usize> = inner.iter().copied().filter(|&s| s != t && in_range(s, t, v, n)).collect();
                for &a in &left {
                    for &b in &right {
                        prop_assert!(!g.has_edge(a.min(b), a.max(b)), "split {} of {:?}: {} meets {}", t, call, a, b);
                    }
                }
            }
        }
    }

    #[test]
    fn fast_graph_equals_oracle(n in 3usize..200, seed in any::<u64>()) {
        let p = polygon(n, seed);
        let td = build_tree_decomposition(&p, &compute_medial_axis(&p, tol()), tol()).unwrap();
        for mode in MODES {
            let oracle = graph_bruteforce(&p, mode, tol());
            prop_assert_eq!(&graph_from_decomposition(&p, &td, mode, tol()), &oracle);
            prop_assert!(check_edge_bound(&oracle));
            prop_assert!(oracle.missing_cycle_edges().is_empty());
        }
    }

    #[test]
    fn mis_agrees_with_subset_enumeration(n in 3usize..=16, seed in any::<u64>()) {
        let p = polygon(n, seed);
        let td = build_tree_decomposition(&p, &compute_medial_axis(&p, tol()), tol()).unwrap();
        for mode in MODES {
            let g = graph_bruteforce(&p, mode, tol());
            let want = alpha_by_subsets(&g);
            let dp = mis_dp(&g, &td).unwrap();
            let bf = mis_bruteforce(&g).unwrap();
            prop_assert_eq!(dp.size, want);
            prop_assert_eq!(bf.size, want);
            prop_assert!(dp.is_valid_for(&g) && bf.is_valid_for(&g));
            prop_assert!(want >= n.div_ceil(4));
        }
    }

    #[test]
    fn dihedral_isomorphism_is_an_equivalence(n in 5usize..=9, pick in any::<prop::sample::Index>(), s1 in 0usize..9, r1 in any::<bool>(), s2 in 0usize..9, r2 in any::<bool>()) {
        let inputs = outerplanar_inputs(n);
        let g = inputs[pick.index(inputs.len())].graph();
        let h = dihedral_image(&g, s1 % n, r1);
        let k = dihedral_image(&h, s2 % n, r2);
        prop_assert!(dihedral_isomorphic(&g, &g).unwrap());
        prop_assert!(dihedral_isomorphic(&g, &h).unwrap());
        prop_assert!(dihedral_isomorphic(&h, &g).unwrap());
        prop_assert!(dihedral_isomorphic(&g, &k).unwrap());
        for other in &inputs {
            let o = other.graph();
            // Distinct canonical inputs are never related.
            prop_assert_eq!(dihedral_isomorphic(&k, &o).unwrap(), o == g);
        }
    }

    #[test]
    fn realizations_are_good_round_trips(n in 3usize..=8, pick in any::<prop::sample::Index>()) {
        let inputs: Vec<_> = outerplanar_inputs(n).into_iter().filter(|g| !g.is_c4()).collect();
        prop_assume!(!inputs.is_empty());
        let g = &inputs[pick.index(inputs.len())];
        let p = realize(g, tol()).unwrap();
        prop_assert!(check_good(&p, tol()).is_good());
        prop_assert!(dihedral_isomorphic(&graph_bruteforce(&p, IntersectionMode::Closed, tol()), &g.graph()).unwrap());
    }
}
