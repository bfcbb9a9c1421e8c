//! Boltzmann-Shannon Index (BSI) for clustered continuous data.
//!
//! The index compares two distributions over the same `k` cluster states: the
//! frequency distribution `p` (share of points per cluster) and a geometric
//! distribution `q` (share of SVD-based spread per cluster). It is one minus
//! their base-2 Jensen-Shannon divergence, so `1` means every cluster holds a
//! share of points equal to its share of the space, and `0` means the two are
//! disjoint.
//!
//! ```
//! use bsi_core::{bsi, Distribution};
//!
//! let p = Distribution::new(vec![0.25, 0.75]).unwrap();
//! let q = Distribution::new(vec![0.75, 0.25]).unwrap();
//! let report = bsi(&p, &q).unwrap();
//! assert!((report.bsi - 0.811278).abs() < 1e-6);
//! ```

pub mod baselines;
pub mod clustering;
pub mod datagen;
pub mod dataset;
pub mod distribution;
pub mod error;
pub mod geometry;
pub mod index;
pub mod rng;

pub use baselines::{
    all_baselines, calinski_harabasz, cluster_size_entropy, davies_bouldin, silhouette_score,
    BaselineScores,
};
pub use clustering::{
    best_of_restarts, fit_restarts, kmeans_fit, select_best, ClusteringResult, KMeansConfig,
    Objective,
};
pub use datagen::{
    allocation_vector, build_allocation_dataset, rescale_cluster_to_spectrum, sample_mixture,
    AllocationScenario, GaussScenario, MixtureComponent, MixtureSpec,
};
pub use dataset::{LabeledDataset, PointMatrix};
pub use distribution::{frequency_distribution, kl_divergence, Distribution, Frequencies};
pub use error::{BsiError, Result};
pub use geometry::{
    bsi_of_labeled_data, cluster_singular_values, evaluate_partition, geometric_distribution,
    ClusterGeometry, GeometricMeasure, Geometry, PartitionEvaluation,
};
pub use index::{bsi, reversal_bsi_closed_form, reversal_bsi_numeric, BsiReport};
