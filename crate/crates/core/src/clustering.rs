//! Lloyd's K-means with Forgy initialisation, a singleton remedy for empty
//! clusters, and best-of-restarts selection by index or by inertia.

use rand::seq::index::sample;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{LabeledDataset, PointMatrix};
use crate::error::{domain, BsiError, Result};
use crate::geometry::{evaluate_partition, GeometricMeasure};
use crate::rng::{stream_rng, StreamDomain};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KMeansConfig {
    pub k: usize,
    pub restarts: usize,
    pub max_iterations: usize,
    /// Stop once no centroid coordinate moves by this much or more.
    pub tolerance: f64,
    pub seed: u64,
    /// Measure used to score each run's partition.
    pub measure: GeometricMeasure,
}

impl KMeansConfig {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            restarts: 10,
            max_iterations: 300,
            tolerance: 1e-8,
            seed: 0,
            measure: GeometricMeasure::default(),
        }
    }

    pub fn restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    pub fn tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn measure(mut self, measure: GeometricMeasure) -> Self {
        self.measure = measure;
        self
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.k == 0 {
            return domain("k must be positive");
        }
        if self.k > n {
            return domain(format!("k = {} exceeds the {n} available points", self.k));
        }
        if self.restarts == 0 {
            return domain("restarts must be at least 1");
        }
        if self.max_iterations == 0 {
            return domain("max_iterations must be at least 1");
        }
        if !(self.tolerance >= 0.0) {
            return domain("tolerance must be nonnegative");
        }
        Ok(())
    }
}

/// How restarts compete.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    #[default]
    MaxBsi,
    MinInertia,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringResult {
    /// 0-based cluster id per point.
    pub assignments: Vec<usize>,
    /// `k x d`.
    pub centroids: PointMatrix,
    pub inertia: f64,
    pub iterations_used: usize,
    pub restart_index: usize,
    /// `None` when the partition has no usable geometry.
    pub bsi_score: Option<f64>,
    /// Inertia after every Lloyd iteration.
    pub inertia_trace: Vec<f64>,
    /// Number of singleton repairs performed.
    pub singleton_repairs: usize,
}

impl ClusteringResult {
    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.centroids.n()];
        for &a in &self.assignments {
            sizes[a] += 1;
        }
        sizes
    }

    pub fn labeled(&self, points: &PointMatrix) -> Result<LabeledDataset> {
        LabeledDataset::new(points.clone(), self.assignments.clone(), self.centroids.n())
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Nearest centroid; ties go to the lowest id.
fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, sq_dist(point, &centroids[0]));
    for (j, c) in centroids.iter().enumerate().skip(1) {
        let dist = sq_dist(point, c);
        if dist < best.1 {
            best = (j, dist);
        }
    }
    best
}

fn means(points: &PointMatrix, assignments: &[usize], k: usize) -> Vec<Vec<f64>> {
    let d = points.d();
    let mut sums = vec![vec![0.0; d]; k];
    let mut counts = vec![0usize; k];
    for (row, &a) in points.rows().zip(assignments) {
        counts[a] += 1;
        for (s, v) in sums[a].iter_mut().zip(row) {
            *s += v;
        }
    }
    for (s, &c) in sums.iter_mut().zip(&counts) {
        debug_assert!(c > 0, "mean of an empty cluster");
        for v in s.iter_mut() {
            *v /= c as f64;
        }
    }
    sums
}

fn inertia_of(points: &PointMatrix, assignments: &[usize], centroids: &[Vec<f64>]) -> f64 {
    points
        .rows()
        .zip(assignments)
        .map(|(row, &a)| sq_dist(row, &centroids[a]))
        .sum()
}

/// Moves the point farthest from its centroid into each empty cluster, in id
/// order. Donor clusters always keep at least one member.
fn singleton_remedy(
    assignments: &mut [usize],
    distances: &mut [f64],
    counts: &mut [usize],
) -> usize {
    let mut repairs = 0;
    for empty in 0..counts.len() {
        if counts[empty] > 0 {
            continue;
        }
        let mut pick: Option<usize> = None;
        for i in 0..assignments.len() {
            if counts[assignments[i]] < 2 {
                continue;
            }
            if pick.map_or(true, |p| distances[i] > distances[p]) {
                pick = Some(i);
            }
        }
        let i = pick.expect("k <= n guarantees a donor with two or more members");
        counts[assignments[i]] -= 1;
        assignments[i] = empty;
        counts[empty] = 1;
        distances[i] = 0.0;
        repairs += 1;
    }
    repairs
}

/// One Lloyd run seeded from `(config.seed, restart)`.
pub fn kmeans_fit(points: &PointMatrix, config: &KMeansConfig, restart: usize) -> Result<ClusteringResult> {
    config.validate(points.n())?;
    let (n, k) = (points.n(), config.k);
    let stream = u32::try_from(restart).map_err(|_| BsiError::Domain("restart index too large".into()))?;
    let mut rng = stream_rng(config.seed, StreamDomain::KMeansRestart, stream);

    let mut centroids: Vec<Vec<f64>> = sample(&mut rng, n, k)
        .into_iter()
        .map(|i| points.row(i).to_vec())
        .collect();
    let mut assignments = vec![0usize; n];
    let mut distances = vec![0.0; n];
    let mut trace: Vec<f64> = Vec::new();
    let mut repairs = 0;
    let mut iterations_used = 0;

    for _ in 0..config.max_iterations {
        iterations_used += 1;
        let mut counts = vec![0usize; k];
        for (i, row) in points.rows().enumerate() {
            let (j, dist) = nearest(row, &centroids);
            assignments[i] = j;
            distances[i] = dist;
            counts[j] += 1;
        }
        repairs += singleton_remedy(&mut assignments, &mut distances, &mut counts);

        let updated = means(points, &assignments, k);
        let shift = centroids
            .iter()
            .flatten()
            .zip(updated.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0_f64, f64::max);
        centroids = updated;

        let inertia = inertia_of(points, &assignments, &centroids);
        if let Some(&prev) = trace.last() {
            debug_assert!(
                inertia <= prev + 1e-9 * prev.max(1.0),
                "inertia increased: {prev} -> {inertia}"
            );
        }
        trace.push(inertia);
        if shift < config.tolerance {
            break;
        }
    }

    let inertia = *trace.last().expect("at least one iteration");
    let centroid_matrix = PointMatrix::from_parts_unchecked(centroids.concat(), k, points.d());
    let labeled = LabeledDataset::new(points.clone(), assignments.clone(), k)?;
    let bsi_score = evaluate_partition(&labeled, config.measure)
        .ok()
        .map(|e| e.report.bsi);

    Ok(ClusteringResult {
        assignments,
        centroids: centroid_matrix,
        inertia,
        iterations_used,
        restart_index: restart,
        bsi_score,
        inertia_trace: trace,
        singleton_repairs: repairs,
    })
}

/// All `config.restarts` runs, in restart order. Runs execute in parallel.
pub fn fit_restarts(points: &PointMatrix, config: &KMeansConfig) -> Result<Vec<ClusteringResult>> {
    config.validate(points.n())?;
    (0..config.restarts)
        .into_par_iter()
        .map(|r| kmeans_fit(points, config, r))
        .collect()
}

/// Picks the winning run from `runs` (ties go to the earliest).
pub fn select_best(runs: Vec<ClusteringResult>, objective: Objective) -> Result<ClusteringResult> {
    let mut best: Option<ClusteringResult> = None;
    for run in runs {
        let better = match (&best, objective) {
            (None, Objective::MinInertia) => true,
            (None, Objective::MaxBsi) => run.bsi_score.is_some(),
            (Some(b), Objective::MinInertia) => run.inertia < b.inertia,
            (Some(b), Objective::MaxBsi) => match (run.bsi_score, b.bsi_score) {
                (Some(r), Some(s)) => r > s,
                _ => false,
            },
        };
        if better {
            best = Some(run);
        }
    }
    best.ok_or_else(|| BsiError::DegenerateGeometry { clusters: Vec::new() })
}

/// Runs every restart and returns the winner under `objective`.
pub fn best_of_restarts(
    points: &PointMatrix,
    config: &KMeansConfig,
    objective: Objective,
) -> Result<ClusteringResult> {
    select_best(fit_restarts(points, config)?, objective)
}
