//! Conventional clustering validity indices, for comparison with the BSI.
//! All distances are Euclidean.

use rayon::prelude::*;
use serde::Serialize;

use crate::dataset::LabeledDataset;
use crate::distribution::frequency_distribution;
use crate::error::{domain, Result};

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn require_two_clusters(data: &LabeledDataset) -> Result<()> {
    if data.k() < 2 {
        return domain(format!("needs k >= 2, got {}", data.k()));
    }
    Ok(())
}

fn centroids(data: &LabeledDataset, members: &[Vec<usize>]) -> Vec<Vec<f64>> {
    members
        .iter()
        .map(|idx| {
            let mut c = vec![0.0; data.d()];
            for &i in idx {
                for (s, v) in c.iter_mut().zip(data.points().row(i)) {
                    *s += v;
                }
            }
            c.iter_mut().for_each(|v| *v /= idx.len().max(1) as f64);
            c
        })
        .collect()
}

/// Pairwise sum in fixed tree order, so parallel callers reproduce bits.
fn tree_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n => {
            let (l, r) = values.split_at(n / 2);
            tree_sum(l) + tree_sum(r)
        }
    }
}

/// Mean silhouette. Points in singleton clusters score 0; `a = b = 0` scores 0.
pub fn silhouette_score(data: &LabeledDataset) -> Result<f64> {
    require_two_clusters(data)?;
    let members = data.members();
    let populated = members.iter().filter(|m| !m.is_empty()).count();
    if populated < 2 {
        return domain("silhouette needs at least two non-empty clusters");
    }
    let labels = data.labels();
    let points = data.points();
    let k = data.k();

    let per_point: Vec<f64> = (0..data.n())
        .into_par_iter()
        .map(|i| {
            let own = labels[i];
            if members[own].len() == 1 {
                return 0.0;
            }
            let mut sums = vec![0.0; k];
            for (j, row) in points.rows().enumerate() {
                if j != i {
                    sums[labels[j]] += dist(points.row(i), row);
                }
            }
            let a = sums[own] / (members[own].len() - 1) as f64;
            let b = (0..k)
                .filter(|&c| c != own && !members[c].is_empty())
                .map(|c| sums[c] / members[c].len() as f64)
                .fold(f64::INFINITY, f64::min);
            let denom = a.max(b);
            if denom > 0.0 {
                (b - a) / denom
            } else {
                0.0
            }
        })
        .collect();
    Ok(tree_sum(&per_point) / data.n() as f64)
}

/// `(tr B / tr W) * (n - k) / (k - 1)`. Zero within-cluster dispersion gives `+inf`.
pub fn calinski_harabasz(data: &LabeledDataset) -> Result<f64> {
    require_two_clusters(data)?;
    let (n, k) = (data.n(), data.k());
    if n <= k {
        return domain(format!("needs n > k, got n = {n}, k = {k}"));
    }
    let members = data.members();
    let cents = centroids(data, &members);
    let mut overall = vec![0.0; data.d()];
    for row in data.points().rows() {
        for (s, v) in overall.iter_mut().zip(row) {
            *s += v;
        }
    }
    overall.iter_mut().for_each(|v| *v /= n as f64);

    let between: f64 = members
        .iter()
        .zip(&cents)
        .map(|(m, c)| m.len() as f64 * dist(c, &overall).powi(2))
        .sum();
    let within: f64 = data
        .points()
        .rows()
        .zip(data.labels())
        .map(|(row, &l)| dist(row, &cents[l]).powi(2))
        .sum();
    if within == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(between / within * (n - k) as f64 / (k - 1) as f64)
}

/// Mean over clusters of `max_j (s_i + s_j) / d_ij`, with `s` the mean
/// distance to the centroid. Coincident centroids give `+inf`.
pub fn davies_bouldin(data: &LabeledDataset) -> Result<f64> {
    require_two_clusters(data)?;
    let members = data.members();
    if let Some(c) = members.iter().position(|m| m.is_empty()) {
        return domain(format!("cluster {c} is empty"));
    }
    let cents = centroids(data, &members);
    let scatter: Vec<f64> = members
        .iter()
        .zip(&cents)
        .map(|(m, c)| m.iter().map(|&i| dist(data.points().row(i), c)).sum::<f64>() / m.len() as f64)
        .collect();
    let k = data.k();
    let mut total = 0.0;
    for i in 0..k {
        let mut worst = 0.0_f64;
        for j in (0..k).filter(|&j| j != i) {
            let sep = dist(&cents[i], &cents[j]);
            let ratio = if sep == 0.0 {
                f64::INFINITY
            } else {
                (scatter[i] + scatter[j]) / sep
            };
            worst = worst.max(ratio);
        }
        total += worst;
    }
    Ok(total / k as f64)
}

/// Shannon entropy (bits) of the cluster-size histogram.
pub fn cluster_size_entropy(labels: &[usize], k: usize) -> Result<f64> {
    Ok(frequency_distribution(labels, k)?.distribution.entropy_bits())
}

/// The four comparison metrics side by side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BaselineScores {
    pub silhouette: f64,
    pub calinski_harabasz: f64,
    pub davies_bouldin: f64,
    pub cluster_size_entropy_bits: f64,
}

pub fn all_baselines(data: &LabeledDataset) -> Result<BaselineScores> {
    Ok(BaselineScores {
        silhouette: silhouette_score(data)?,
        calinski_harabasz: calinski_harabasz(data)?,
        davies_bouldin: davies_bouldin(data)?,
        cluster_size_entropy_bits: cluster_size_entropy(data.labels(), data.k())?,
    })
}
