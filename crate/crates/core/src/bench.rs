//! Wall-clock benchmarks of the pipeline stages and the scaling checks run
//! on them.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::constructions::random_convex_polygon;
use crate::decomposition::build_tree_decomposition;
use crate::error::Result;
use crate::geometry::{IntersectionMode, Tolerance};
use crate::graph::graph_from_decomposition;
use crate::medial_axis::compute_medial_axis;

pub const DEFAULT_SIZES: [usize; 4] = [1_000, 10_000, 100_000, 1_000_000];

/// Per-stage best-of times in seconds for one size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub reps: usize,
    pub medial_axis: f64,
    pub decomposition: f64,
    pub graph: f64,
    /// Medial axis, decomposition and graph in one run.
    pub pipeline: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub seed: u64,
    pub rows: Vec<BenchRow>,
}

/// Spread of `time / model(n)` across sizes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingFit {
    /// `time / model(n)` per row.
    pub normalized: Vec<f64>,
    /// Geometric mean of `normalized`.
    pub constant: f64,
    /// Largest factor by which a row deviates from `constant`, either way.
    pub worst_factor: f64,
}

impl ScalingFit {
    pub fn fit(samples: &[(usize, f64)], model: impl Fn(f64) -> f64) -> ScalingFit {
        let normalized: Vec<f64> = samples.iter().map(|&(n, t)| t / model(n as f64)).collect();
        let k = normalized.len().max(1) as f64;
        let constant = (normalized.iter().map(|v| v.ln()).sum::<f64>() / k).exp();
        let worst_factor = normalized
            .iter()
            .map(|v| (v / constant).max(constant / v))
            .fold(1.0, f64::max);
        ScalingFit {
            normalized,
            constant,
            worst_factor,
        }
    }

    pub fn within(&self, factor: f64) -> bool {
        self.worst_factor.is_finite() && self.worst_factor <= factor
    }
}

impl BenchReport {
    /// Decomposition stage against `c * n`.
    pub fn decomposition_fit(&self) -> ScalingFit {
        let s: Vec<_> = self.rows.iter().map(|r| (r.n, r.decomposition)).collect();
        ScalingFit::fit(&s, |n| n)
    }

    /// Full pipeline against `c * n log n`.
    pub fn pipeline_fit(&self) -> ScalingFit {
        let s: Vec<_> = self.rows.iter().map(|r| (r.n, r.pipeline)).collect();
        ScalingFit::fit(&s, |n| n * n.ln())
    }
}

/// Runs `f` at least once and until `budget` is spent (at most `max_reps`
/// times); returns the fastest run in seconds and the number of runs.
fn best_of<T>(budget: Duration, max_reps: usize, mut f: impl FnMut() -> T) -> (f64, usize) {
    let start = Instant::now();
    let mut best = f64::INFINITY;
    let mut reps = 0;
    while reps < max_reps && (reps == 0 || start.elapsed() < budget) {
        let t = Instant::now();
        std::hint::black_box(f());
        best = best.min(t.elapsed().as_secs_f64());
        reps += 1;
    }
    (best, reps)
}

/// Times each stage on a random polygon of every size. Each stage is
/// repeated for up to `budget` and the fastest run is kept.
pub fn run_bench(sizes: &[usize], seed: u64, budget: Duration, tol: Tolerance) -> Result<BenchReport> {
    let mut rows = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let p = random_convex_polygon(n, seed)?;
        let axis = compute_medial_axis(&p, tol);
        let td = build_tree_decomposition(&p, &axis, tol)?;
        let (medial_axis, r1) = best_of(budget, 1000, || compute_medial_axis(&p, tol));
        let (decomposition, r2) = best_of(budget, 1000, || build_tree_decomposition(&p, &axis, tol));
        let (graph, r3) = best_of(budget, 1000, || {
            graph_from_decomposition(&p, &td, IntersectionMode::Closed, tol)
        });
        let (pipeline, r4) = best_of(budget, 1000, || -> Result<usize> {
            let a = compute_medial_axis(&p, tol);
            let t = build_tree_decomposition(&p, &a, tol)?;
            Ok(graph_from_decomposition(&p, &t, IntersectionMode::Closed, tol).edge_count())
        });
        rows.push(BenchRow {
            n,
            reps: r1.min(r2).min(r3).min(r4),
            medial_axis,
            decomposition,
            graph,
            pipeline,
        });
    }
    Ok(BenchReport { seed, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_of_exact_model_is_one() {
        let s = [(10, 1.0), (100, 10.0), (1000, 100.0)];
        let f = ScalingFit::fit(&s, |n| n);
        assert!((f.worst_factor - 1.0).abs() < 1e-12);
        assert!((f.constant - 0.1).abs() < 1e-12);
        assert!(f.within(2.0));
    }

    #[test]
    fn fit_detects_quadratic() {
        let s: Vec<_> = [10usize, 100, 1000].iter().map(|&n| (n, (n * n) as f64)).collect();
        let f = ScalingFit::fit(&s, |n| n);
        assert!((f.worst_factor - 10.0).abs() < 1e-9);
        assert!(!f.within(2.0));
    }

    #[test]
    fn small_bench_runs() {
        let r = run_bench(&[50, 100], 1, Duration::from_millis(5), Tolerance::default()).unwrap();
        assert_eq!(r.rows.len(), 2);
        assert!(r.rows.iter().all(|x| x.reps >= 1 && x.pipeline > 0.0));
    }
}
