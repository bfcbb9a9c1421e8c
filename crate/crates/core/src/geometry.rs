//! SVD-based geometric measure of each labelled cluster and the normalised
//! geometric distribution `q`.
//!
//! Each cluster's point matrix is centred on its own mean and decomposed; the
//! singular values describe the spread along the principal directions. Their
//! product is the cluster's volume. By default the index uses the geometric
//! mean of the singular values (the `d`-th root of the volume), which keeps the
//! measure in units of length whatever the dimension; see [`GeometricMeasure`].

use nalgebra::{DMatrix, SVD};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{LabeledDataset, PointMatrix};
use crate::distribution::{frequency_distribution, Distribution, Frequencies};
use crate::error::{BsiError, Result};
use crate::index::{bsi, BsiReport};

/// Relative floor applied to every cluster measure before normalisation.
pub const MEASURE_FLOOR: f64 = 1e-12;

/// How a cluster's singular values become one scalar mass.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeometricMeasure {
    /// Geometric mean of the `d` singular values, `(prod s_i)^(1/d)`.
    #[default]
    Spread,
    /// Product of the `d` singular values.
    Volume,
}

impl GeometricMeasure {
    pub fn evaluate(self, singular_values: &[f64]) -> f64 {
        match self {
            GeometricMeasure::Volume => singular_values.iter().product(),
            GeometricMeasure::Spread => {
                if singular_values.is_empty() || singular_values.iter().any(|s| *s <= 0.0) {
                    return 0.0;
                }
                let mean_log = singular_values.iter().map(|s| s.ln()).sum::<f64>()
                    / singular_values.len() as f64;
                mean_log.exp()
            }
        }
    }
}

/// Per-cluster geometry summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterGeometry {
    /// 0-based cluster id.
    pub cluster_id: usize,
    pub member_count: usize,
    /// Descending, length `d`.
    pub singular_values: Vec<f64>,
    /// Product of the singular values.
    pub volume: f64,
    /// Mass fed into `q` (after flooring).
    pub measure: f64,
    /// True when the raw measure was below the floor and got lifted.
    pub floored: bool,
}

impl ClusterGeometry {
    /// No members, or too few to span `d` dimensions.
    pub fn is_degenerate(&self) -> bool {
        self.member_count == 0 || self.singular_values.contains(&0.0)
    }
}

/// Thin SVD of a matrix with at least as many rows as columns.
pub(crate) struct ThinSvd {
    pub u: DMatrix<f64>,
    pub singular_values: Vec<f64>,
    pub v_t: DMatrix<f64>,
}

pub(crate) fn thin_svd(matrix: DMatrix<f64>) -> ThinSvd {
    let svd = SVD::new(matrix, true, true);
    ThinSvd {
        u: svd.u.expect("u requested"),
        singular_values: svd.singular_values.iter().copied().collect(),
        v_t: svd.v_t.expect("v_t requested"),
    }
}

/// Row-major points minus their column means, as an `nalgebra` matrix.
pub(crate) fn centered_matrix(points: &PointMatrix) -> (DMatrix<f64>, Vec<f64>) {
    let (n, d) = (points.n(), points.d());
    let mut mean = vec![0.0; d];
    for row in points.rows() {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }
    let centered = DMatrix::from_fn(n, d, |i, j| points.row(i)[j] - mean[j]);
    (centered, mean)
}

/// Descending singular values of the mean-centred cluster matrix, padded with
/// zeros to length `d`. An empty cluster yields all zeros.
pub fn cluster_singular_values(points: &PointMatrix) -> Vec<f64> {
    let d = points.d();
    let mut out = vec![0.0; d];
    if points.n() < 2 {
        return out;
    }
    let (centered, _) = centered_matrix(points);
    let svd = SVD::new(centered, false, false);
    let mut values: Vec<f64> = svd.singular_values.iter().map(|s| s.max(0.0)).collect();
    values.sort_by(|a, b| b.total_cmp(a));
    for (o, v) in out.iter_mut().zip(values) {
        *o = v;
    }
    out
}

/// Geometric distribution plus the per-cluster details it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct Geometry {
    pub distribution: Distribution,
    pub clusters: Vec<ClusterGeometry>,
}

/// `q[i] = measure_i / sum_j measure_j` with every measure floored at
/// [`MEASURE_FLOOR`] times the largest one.
pub fn geometric_distribution(data: &LabeledDataset, measure: GeometricMeasure) -> Result<Geometry> {
    let members = data.members();
    let raw: Vec<(usize, Vec<f64>)> = members
        .par_iter()
        .map(|idx| {
            let sv = cluster_singular_values(&data.points().select(idx));
            (idx.len(), sv)
        })
        .collect();

    let measures: Vec<f64> = raw.iter().map(|(_, sv)| measure.evaluate(sv)).collect();
    let largest = measures.iter().copied().fold(0.0_f64, f64::max);
    if largest <= 0.0 {
        return Err(BsiError::DegenerateGeometry {
            clusters: (0..data.k()).collect(),
        });
    }
    let floor = MEASURE_FLOOR * largest;

    let clusters: Vec<ClusterGeometry> = raw
        .into_iter()
        .zip(&measures)
        .enumerate()
        .map(|(cluster_id, ((member_count, singular_values), &m))| ClusterGeometry {
            cluster_id,
            member_count,
            volume: singular_values.iter().product(),
            singular_values,
            measure: m.max(floor),
            floored: m < floor,
        })
        .collect();
    let masses: Vec<f64> = clusters.iter().map(|c| c.measure).collect();
    Ok(Geometry {
        distribution: Distribution::from_masses(&masses)?,
        clusters,
    })
}

/// Everything computed on the way to the index of a labelled dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionEvaluation {
    pub report: BsiReport,
    pub frequency: Frequencies,
    pub geometry: Geometry,
}

pub fn evaluate_partition(
    data: &LabeledDataset,
    measure: GeometricMeasure,
) -> Result<PartitionEvaluation> {
    let frequency = frequency_distribution(data.labels(), data.k())?;
    let geometry = geometric_distribution(data, measure)?;
    let report = bsi(&frequency.distribution, &geometry.distribution)?;
    Ok(PartitionEvaluation {
        report,
        frequency,
        geometry,
    })
}

/// Index of a labelled dataset with the default measure.
pub fn bsi_of_labeled_data(data: &LabeledDataset) -> Result<BsiReport> {
    evaluate_partition(data, GeometricMeasure::default()).map(|e| e.report)
}
