//! Corpus verification: every fast path against its oracle, every proven
//! bound against the computed value.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::{extremal_polygon, random_convex_polygon, regular_polygon};
use crate::decomposition::{build_tree_decomposition, validate_decomposition, width};
use crate::geometry::{ConvexPolygon, IntersectionMode, Tolerance};
use crate::graph::{check_edge_bound, dihedral_isomorphic, graph_bruteforce, graph_from_decomposition};
use crate::medial_axis::compute_medial_axis;
use crate::mis::{mis_bruteforce, mis_dp, BRUTEFORCE_LIMIT};
use crate::realizer::{check_good, outerplanar_inputs, realize, OuterplanarInput};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Extremal,
    Regular,
    Random,
    Outerplanar,
}

/// One corpus entry. Random entries carry the polygon seed, outerplanar
/// entries their chords.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Instance {
    pub id: usize,
    pub family: Family,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chords: Option<Vec<(usize, usize)>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// The polygon could be built.
    Generation,
    /// Width at most 3.
    Width,
    /// `n - 2` bags for `n >= 4`, one bag for triangles.
    BagCount,
    /// Coverage and connectivity of the decomposition.
    Decomposition,
    /// Fast graph equals the all-pairs graph.
    OracleEquivalence,
    /// At most `3n - 6` edges.
    EdgeBound,
    /// Independence number at least `ceil(n/4)`.
    AlphaLowerBound,
    /// Independence number exactly `ceil(n/4)` on extremal polygons.
    AlphaExtremal,
    /// DP size equals brute force for small graphs.
    MisOracle,
    /// Returned witness is independent and of the claimed size.
    Witness,
    /// Realized polygon is good.
    Goodness,
    /// Realized polygon has the requested graph up to rotation/reflection.
    RoundTrip,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckFailure {
    pub check: Check,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<IntersectionMode>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceReport {
    pub instance: Instance,
    /// Checks that ran, with the mode they ran in.
    pub checks: Vec<(Check, Option<IntersectionMode>)>,
    pub failures: Vec<CheckFailure>,
    pub millis: f64,
}

impl InstanceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    /// Sorted by instance id.
    pub instances: Vec<InstanceReport>,
    pub millis: f64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.instances.iter().all(InstanceReport::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = (&Instance, &CheckFailure)> {
        self.instances
            .iter()
            .flat_map(|r| r.failures.iter().map(move |f| (&r.instance, f)))
    }

    /// Failures of `check` in any mode.
    pub fn failures_of(&self, check: Check) -> Vec<(&Instance, &CheckFailure)> {
        self.failures().filter(|(_, f)| f.check == check).collect()
    }

    /// Number of (instance, mode) runs of `check`.
    pub fn runs_of(&self, check: Check) -> usize {
        self.instances
            .iter()
            .map(|r| r.checks.iter().filter(|c| c.0 == check).count())
            .sum()
    }

    /// Instances whose polygon could not be built.
    pub fn missing(&self) -> Vec<&Instance> {
        self.failures_of(Check::Generation)
            .into_iter()
            .map(|(i, _)| i)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusConfig {
    pub extremal: std::ops::RangeInclusive<usize>,
    pub regular: std::ops::RangeInclusive<usize>,
    pub random_count: usize,
    pub random_n: std::ops::RangeInclusive<usize>,
    /// Largest cycle length for the outerplanar round trip; 0 disables it.
    pub outerplanar_max_n: usize,
    pub seed: u64,
}

impl CorpusConfig {
    /// Only the outerplanar round trip up to `max_n` vertices.
    pub fn outerplanar_only(max_n: usize) -> Self {
        let none = std::ops::RangeInclusive::new(1, 0);
        CorpusConfig {
            extremal: none.clone(),
            regular: none,
            random_count: 0,
            outerplanar_max_n: max_n,
            ..CorpusConfig::default()
        }
    }
}

impl Default for CorpusConfig {
    /// Extremal 3..=40, regular 3..=100, 1000 random polygons with 3..=200
    /// sides, no outerplanar section.
    fn default() -> Self {
        CorpusConfig {
            extremal: 3..=40,
            regular: 3..=100,
            random_count: 1000,
            random_n: 3..=200,
            outerplanar_max_n: 0,
            seed: 0,
        }
    }
}

/// Corpus entries in id order. Random entry `i` draws its size and polygon
/// seed from stream `i` of the generator seeded by `cfg.seed`.
pub fn corpus(cfg: &CorpusConfig) -> Vec<Instance> {
    let mut out = Vec::new();
    let mut push = |family, n, seed, chords| {
        let id = out.len();
        out.push(Instance {
            id,
            family,
            n,
            seed,
            chords,
        });
    };
    for n in cfg.extremal.clone() {
        push(Family::Extremal, n, None, None);
    }
    for n in cfg.regular.clone() {
        push(Family::Regular, n, None, None);
    }
    for i in 0..cfg.random_count {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(i as u64);
        let n = rng.gen_range(cfg.random_n.clone());
        push(Family::Random, n, Some(rng.gen()), None);
    }
    for n in 3..=cfg.outerplanar_max_n {
        for g in outerplanar_inputs(n) {
            push(Family::Outerplanar, n, None, Some(g.chords().to_vec()));
        }
    }
    out
}

fn build(inst: &Instance, tol: Tolerance) -> crate::Result<ConvexPolygon> {
    match inst.family {
        Family::Extremal => extremal_polygon(inst.n, tol),
        Family::Regular => regular_polygon(inst.n, 1.0),
        Family::Random => random_convex_polygon(inst.n, inst.seed.unwrap_or(0)),
        Family::Outerplanar => unreachable!("outerplanar entries are realized, not built"),
    }
}

struct Recorder {
    checks: Vec<(Check, Option<IntersectionMode>)>,
    failures: Vec<CheckFailure>,
}

impl Recorder {
    fn check(&mut self, check: Check, mode: Option<IntersectionMode>, ok: bool, detail: impl FnOnce() -> String) {
        self.checks.push((check, mode));
        if !ok {
            self.failures.push(CheckFailure {
                check,
                mode,
                detail: detail(),
            });
        }
    }
}

fn ceil_quarter(n: usize) -> usize {
    n.div_ceil(4)
}

fn verify_polygon(inst: &Instance, p: &ConvexPolygon, tol: Tolerance, rec: &mut Recorder) {
    let n = p.n();
    let axis = compute_medial_axis(p, tol);
    let td = match build_tree_decomposition(p, &axis, tol) {
        Ok(td) => td,
        Err(e) => {
            rec.check(Check::Decomposition, None, false, || format!("build failed: {e}"));
            return;
        }
    };
    let w = width(&td);
    rec.check(Check::Width, None, w <= 3, || format!("width {w}"));
    let want_bags = if n == 3 { 1 } else { n - 2 };
    rec.check(Check::BagCount, None, td.len() == want_bags, || {
        format!("{} bags, expected {want_bags}", td.len())
    });

    for mode in [IntersectionMode::Closed, IntersectionMode::Open] {
        let m = Some(mode);
        let oracle = graph_bruteforce(p, mode, tol);
        let report = validate_decomposition(&oracle, &td);
        rec.check(Check::Decomposition, m, report.passed(), || format!("{report:?}"));

        let fast = graph_from_decomposition(p, &td, mode, tol);
        rec.check(Check::OracleEquivalence, m, fast == oracle, || {
            let extra: Vec<_> = fast.edges().iter().filter(|e| !oracle.has_edge(e.0, e.1)).collect();
            let missing: Vec<_> = oracle.edges().iter().filter(|e| !fast.has_edge(e.0, e.1)).collect();
            format!("extra {extra:?}, missing {missing:?}")
        });
        rec.check(Check::EdgeBound, m, check_edge_bound(&oracle), || {
            format!("{} edges on {n} vertices", oracle.edge_count())
        });

        let mis = match mis_dp(&oracle, &td) {
            Ok(mis) => mis,
            Err(e) => {
                rec.check(Check::Witness, m, false, || format!("dp failed: {e}"));
                continue;
            }
        };
        rec.check(Check::Witness, m, mis.is_valid_for(&oracle), || {
            format!("witness {:?}", mis.witness)
        });
        let lo = ceil_quarter(n);
        rec.check(Check::AlphaLowerBound, m, mis.size >= lo, || {
            format!("alpha {} < {lo}", mis.size)
        });
        if inst.family == Family::Extremal && mode == IntersectionMode::Closed {
            rec.check(Check::AlphaExtremal, m, mis.size == lo, || {
                format!("alpha {} != {lo}", mis.size)
            });
        }
        if n <= BRUTEFORCE_LIMIT {
            let size = mis_bruteforce(&oracle).map(|b| b.size);
            rec.check(Check::MisOracle, m, size == Ok(mis.size), || {
                format!("dp {} vs brute force {size:?}", mis.size)
            });
        }
    }
}

fn verify_outerplanar(inst: &Instance, tol: Tolerance, rec: &mut Recorder) {
    let chords = inst.chords.clone().unwrap_or_default();
    let g = match crate::realizer::parse_outerplanar(inst.n, &chords) {
        Ok(g) => g,
        Err(e) => {
            rec.check(Check::Generation, None, false, || e.to_string());
            return;
        }
    };
    if g.is_c4() {
        let r = realize(&g, tol);
        let refused = matches!(r, Err(crate::Error::NotRealizable(_)));
        rec.check(Check::RoundTrip, None, refused, || format!("C4 gave {r:?}"));
        return;
    }
    verify_realization(&g, tol, rec);
}

fn verify_realization(g: &OuterplanarInput, tol: Tolerance, rec: &mut Recorder) {
    let p = match realize(g, tol) {
        Ok(p) => p,
        Err(e) => {
            rec.check(Check::Generation, None, false, || e.to_string());
            return;
        }
    };
    let good = check_good(&p, tol);
    rec.check(Check::Goodness, None, good.is_good(), || format!("{good:?}"));
    let got = graph_bruteforce(&p, IntersectionMode::Closed, tol);
    let iso = dihedral_isomorphic(&got, &g.graph());
    rec.check(Check::RoundTrip, None, iso == Ok(true), || {
        format!("realized edges {:?}", got.edges())
    });
}

/// Runs every applicable check on one corpus entry.
pub fn verify_instance(inst: &Instance, tol: Tolerance) -> InstanceReport {
    let start = Instant::now();
    let mut rec = Recorder {
        checks: Vec::new(),
        failures: Vec::new(),
    };
    if inst.family == Family::Outerplanar {
        verify_outerplanar(inst, tol, &mut rec);
    } else {
        match build(inst, tol) {
            Ok(p) => verify_polygon(inst, &p, tol, &mut rec),
            Err(e) => rec.check(Check::Generation, None, false, || e.to_string()),
        }
    }
    InstanceReport {
        instance: inst.clone(),
        checks: rec.checks,
        failures: rec.failures,
        millis: start.elapsed().as_secs_f64() * 1e3,
    }
}

/// Verifies all entries in parallel; the report is sorted by instance id.
pub fn verify_corpus(instances: &[Instance], tol: Tolerance) -> VerifyReport {
    let start = Instant::now();
    let mut reports: Vec<InstanceReport> = instances.par_iter().map(|i| verify_instance(i, tol)).collect();
    reports.sort_by_key(|r| r.instance.id);
    VerifyReport {
        instances: reports,
        millis: start.elapsed().as_secs_f64() * 1e3,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> CorpusConfig {
        CorpusConfig {
            extremal: 3..=12,
            regular: 3..=20,
            random_count: 40,
            random_n: 3..=60,
            outerplanar_max_n: 6,
            seed: 3,
        }
    }

    #[test]
    fn corpus_layout() {
        let c = corpus(&CorpusConfig::default());
        assert_eq!(c.len(), 38 + 98 + 1000);
        assert!(c.iter().enumerate().all(|(i, x)| x.id == i));
        let random: Vec<_> = c.iter().filter(|x| x.family == Family::Random).collect();
        assert!(random.iter().all(|x| (3..=200).contains(&x.n)));
        assert_eq!(corpus(&CorpusConfig::default()), c);
    }

    #[test]
    fn small_corpus_passes() {
        let tol = Tolerance::default();
        let r = verify_corpus(&corpus(&small()), tol);
        let fails: Vec<_> = r.failures().collect();
        assert!(fails.is_empty(), "{fails:?}");
        assert_eq!(r.runs_of(Check::AlphaExtremal), 10);
        assert!(r.runs_of(Check::Goodness) > 0);
    }

    #[test]
    fn report_order_is_stable() {
        let tol = Tolerance::default();
        let c = corpus(&small());
        let mut rev = c.clone();
        rev.reverse();
        let a: Vec<_> = verify_corpus(&c, tol)
            .instances
            .into_iter()
            .map(|r| (r.instance, r.failures))
            .collect();
        let b: Vec<_> = verify_corpus(&rev, tol)
            .instances
            .into_iter()
            .map(|r| (r.instance, r.failures))
            .collect();
        assert_eq!(a, b);
    }
}
