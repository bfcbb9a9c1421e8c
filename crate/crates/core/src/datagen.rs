//! Seeded generators for the experiment families: isotropic Gaussian
//! mixtures, and the resource-allocation scenario whose groups are rescaled
//! to a prescribed singular spectrum.

use nalgebra::DMatrix;
use rand::distr::weighted::WeightedIndex;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{LabeledDataset, PointMatrix};
use crate::distribution::{Distribution, NORMALIZATION_TOLERANCE};
use crate::error::{domain, BsiError, Result};
use crate::geometry::{centered_matrix, thin_svd};
use crate::rng::{stream_rng, StreamDomain};

/// Attempts at redrawing allocation labels before giving up.
pub const LABEL_RESAMPLE_BUDGET: u32 = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureComponent {
    pub weight: f64,
    pub mean: Vec<f64>,
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureSpec {
    pub components: Vec<MixtureComponent>,
    pub n_total: usize,
    pub seed: u64,
}

impl MixtureSpec {
    pub fn validate(&self) -> Result<()> {
        let Some(first) = self.components.first() else {
            return domain("mixture has no components");
        };
        let d = first.mean.len();
        if d == 0 {
            return domain("component means must have at least one coordinate");
        }
        if self.n_total == 0 {
            return domain("n_total must be positive");
        }
        for (i, c) in self.components.iter().enumerate() {
            if c.mean.len() != d {
                return domain(format!("component {i} has dimension {}, expected {d}", c.mean.len()));
            }
            if !(c.std > 0.0) || !c.std.is_finite() {
                return domain(format!("component {i} has std {}", c.std));
            }
            if !(c.weight >= 0.0) || c.mean.iter().any(|m| !m.is_finite()) {
                return domain(format!("component {i} has an invalid weight or mean"));
            }
        }
        let total: f64 = self.components.iter().map(|c| c.weight).sum();
        if (total - 1.0).abs() >= NORMALIZATION_TOLERANCE {
            return domain(format!("component weights sum to {total}"));
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.components.first().map_or(0, |c| c.mean.len())
    }
}

/// Draws component labels and coordinates from separate streams.
pub fn sample_mixture(spec: &MixtureSpec) -> Result<LabeledDataset> {
    spec.validate()?;
    let d = spec.dimension();
    let weights = WeightedIndex::new(spec.components.iter().map(|c| c.weight))
        .map_err(|e| BsiError::Domain(format!("mixture weights: {e}")))?;
    let mut label_rng = stream_rng(spec.seed, StreamDomain::MixtureLabels, 0);
    let mut coord_rng = stream_rng(spec.seed, StreamDomain::MixtureCoordinates, 0);

    let labels: Vec<usize> = (0..spec.n_total).map(|_| label_rng.sample(&weights)).collect();
    let mut data = Vec::with_capacity(spec.n_total * d);
    for &l in &labels {
        let c = &spec.components[l];
        for m in &c.mean {
            let z: f64 = coord_rng.sample(StandardNormal);
            data.push(m + c.std * z);
        }
    }
    LabeledDataset::new(
        PointMatrix::new(data, spec.n_total, d)?,
        labels,
        spec.components.len(),
    )
}

/// The three canonical two-dimensional mixtures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GaussScenario {
    /// Equal weights, equal widths, well separated.
    Balanced,
    /// Same geometry, weights 0.6 / 0.3 / 0.1.
    Imbalanced,
    /// A dense majority overlapped by two diffuse minorities.
    Overlapping,
}

impl GaussScenario {
    pub const ALL: [GaussScenario; 3] = [Self::Balanced, Self::Imbalanced, Self::Overlapping];

    pub fn spec(self, n_total: usize, seed: u64) -> MixtureSpec {
        let separated = [[0.0, 0.0], [8.0, 0.0], [4.0, 7.0]];
        let (weights, means, stds): ([f64; 3], [[f64; 2]; 3], [f64; 3]) = match self {
            Self::Balanced => ([1.0 / 3.0; 3], separated, [1.0; 3]),
            Self::Imbalanced => ([0.6, 0.3, 0.1], separated, [1.0; 3]),
            Self::Overlapping => (
                [0.8, 0.15, 0.05],
                [[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]],
                [0.5, 3.0, 3.0],
            ),
        };
        MixtureSpec {
            components: (0..3)
                .map(|i| MixtureComponent {
                    weight: weights[i],
                    mean: means[i].to_vec(),
                    std: stds[i],
                })
                .collect(),
            n_total,
            seed,
        }
    }
}

/// `r(beta) = (1+beta)/2 * p + (1-beta)/2 * reverse(p)`.
pub fn allocation_vector(p_pop: &Distribution, beta: f64) -> Result<Vec<f64>> {
    if !(-1.0..=1.0).contains(&beta) {
        return domain(format!("beta = {beta} is outside [-1, 1]"));
    }
    let w = p_pop.weights();
    let (fwd, rev) = ((1.0 + beta) / 2.0, (1.0 - beta) / 2.0);
    Ok(w.iter()
        .zip(w.iter().rev())
        .map(|(p, q)| fwd * p + rev * q)
        .collect())
}

/// Replaces the singular values of the centred cluster with `targets`,
/// keeping its singular vectors and its mean.
pub fn rescale_cluster_to_spectrum(points: &PointMatrix, targets: &[f64]) -> Result<PointMatrix> {
    let (m, d) = (points.n(), points.d());
    if targets.len() != d {
        return domain(format!("{} targets for dimension {d}", targets.len()));
    }
    if targets.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
        return domain("target singular values must be positive and finite");
    }
    if m < d {
        return domain(format!("need at least {d} points to rescale, got {m}"));
    }
    let (centered, mean) = centered_matrix(points);
    let svd = thin_svd(centered);
    let largest = svd.singular_values.iter().copied().fold(0.0_f64, f64::max);
    if svd.singular_values.len() < d
        || svd.singular_values.iter().any(|&s| s <= largest * 1e-12)
    {
        return Err(BsiError::DegenerateRescale {
            singular_values: svd.singular_values,
        });
    }
    // Descending targets paired with descending singular values.
    let mut sorted_targets = targets.to_vec();
    sorted_targets.sort_by(|a, b| b.total_cmp(a));
    let spectrum = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(sorted_targets));
    let rebuilt = &svd.u * spectrum * &svd.v_t;

    let mut data = Vec::with_capacity(m * d);
    for i in 0..m {
        for j in 0..d {
            data.push(rebuilt[(i, j)] + mean[j]);
        }
    }
    PointMatrix::new(data, m, d)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AllocationScenario {
    pub p_pop: Distribution,
    pub beta: f64,
    /// Allocation shares, one per group.
    pub r: Vec<f64>,
    pub n_total: usize,
    pub d: usize,
    pub seed: u64,
}

impl AllocationScenario {
    pub fn new(p_pop: Distribution, beta: f64, n_total: usize, d: usize, seed: u64) -> Result<Self> {
        if d == 0 {
            return domain("dimension must be at least 1");
        }
        let r = allocation_vector(&p_pop, beta)?;
        if let Some(i) = r.iter().position(|v| *v <= 0.0) {
            return domain(format!("allocation share r[{i}] is zero at beta = {beta}"));
        }
        Ok(Self {
            p_pop,
            beta,
            r,
            n_total,
            d,
            seed,
        })
    }

    /// The population shares used in the extreme-imbalance experiment.
    pub fn skewed_population() -> Distribution {
        Distribution::new(vec![0.950, 0.049, 0.001]).expect("valid shares")
    }
}

fn draw_group_labels(scenario: &AllocationScenario) -> Result<Vec<usize>> {
    let k = scenario.p_pop.k();
    let weights = WeightedIndex::new(scenario.p_pop.weights())
        .map_err(|e| BsiError::Domain(format!("population shares: {e}")))?;
    for attempt in 0..LABEL_RESAMPLE_BUDGET {
        let mut rng = stream_rng(scenario.seed, StreamDomain::AllocationLabels, attempt);
        let labels: Vec<usize> = (0..scenario.n_total).map(|_| rng.sample(&weights)).collect();
        let mut counts = vec![0usize; k];
        for &l in &labels {
            counts[l] += 1;
        }
        if counts.iter().all(|&c| c > scenario.d) {
            return Ok(labels);
        }
    }
    Err(BsiError::Generation(format!(
        "some group kept fewer than {} members after {LABEL_RESAMPLE_BUDGET} label draws (n = {})",
        scenario.d + 1,
        scenario.n_total
    )))
}

/// Standard-normal points, labelled i.i.d. from the population shares, with
/// group `i` rescaled so every singular value equals `r[i]`.
pub fn build_allocation_dataset(scenario: &AllocationScenario) -> Result<LabeledDataset> {
    let (n, d, k) = (scenario.n_total, scenario.d, scenario.p_pop.k());
    let labels = draw_group_labels(scenario)?;

    let mut rng = stream_rng(scenario.seed, StreamDomain::AllocationCoordinates, 0);
    let raw: Vec<f64> = (0..n * d).map(|_| rng.sample(StandardNormal)).collect();
    let raw = PointMatrix::new(raw, n, d)?;
    let unscaled = LabeledDataset::new(raw, labels, k)?;

    let members = unscaled.members();
    let rescaled: Vec<PointMatrix> = members
        .par_iter()
        .enumerate()
        .map(|(g, idx)| {
            let targets = vec![scenario.r[g]; d];
            rescale_cluster_to_spectrum(&unscaled.points().select(idx), &targets)
        })
        .collect::<Result<_>>()?;

    let mut data = vec![0.0; n * d];
    for (idx, group) in members.iter().zip(&rescaled) {
        for (row, &i) in group.rows().zip(idx) {
            data[i * d..(i + 1) * d].copy_from_slice(row);
        }
    }
    let (_, labels, _) = unscaled.into_parts();
    LabeledDataset::new(PointMatrix::new(data, n, d)?, labels, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::cluster_singular_values;

    #[test]
    fn allocation_endpoints_and_midpoint() {
        let p = AllocationScenario::skewed_population();
        let close = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12);
        assert!(close(&allocation_vector(&p, 1.0).unwrap(), &[0.950, 0.049, 0.001]));
        assert!(close(&allocation_vector(&p, -1.0).unwrap(), &[0.001, 0.049, 0.950]));
        assert!(close(&allocation_vector(&p, 0.0).unwrap(), &[0.4755, 0.049, 0.4755]));
        assert!(allocation_vector(&p, 1.01).is_err());
        assert!(allocation_vector(&p, f64::NAN).is_err());
    }

    #[test]
    fn palindromic_population_gives_constant_allocation() {
        let p = Distribution::uniform(3).unwrap();
        for beta in [-1.0, -0.3, 0.0, 0.8] {
            let r = allocation_vector(&p, beta).unwrap();
            assert!(r.iter().all(|v| (v - 1.0 / 3.0).abs() < 1e-15));
        }
    }

    #[test]
    fn rescale_to_own_spectrum_is_identity() {
        let p = PointMatrix::from_rows(&[[0.0, 1.0], [2.0, 0.5], [3.0, 4.0], [-1.0, 2.0], [0.5, 0.5]])
            .unwrap();
        let sv = cluster_singular_values(&p);
        let out = rescale_cluster_to_spectrum(&p, &sv).unwrap();
        for (a, b) in p.as_slice().iter().zip(out.as_slice()) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn rescale_rejects_rank_deficiency() {
        let p = PointMatrix::from_rows(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]).unwrap();
        assert!(matches!(
            rescale_cluster_to_spectrum(&p, &[1.0, 1.0]),
            Err(BsiError::DegenerateRescale { .. })
        ));
        let p = PointMatrix::from_rows(&[[0.0, 0.0]]).unwrap();
        assert!(rescale_cluster_to_spectrum(&p, &[1.0, 1.0]).is_err());
        assert!(rescale_cluster_to_spectrum(&p, &[1.0]).is_err());
    }

    #[test]
    fn single_component_mixture() {
        let spec = MixtureSpec {
            components: vec![MixtureComponent {
                weight: 1.0,
                mean: vec![3.0, -2.0],
                std: 0.5,
            }],
            n_total: 100,
            seed: 5,
        };
        let ds = sample_mixture(&spec).unwrap();
        assert!(ds.labels().iter().all(|&l| l == 0));
        let bound = 4.0 * 0.5 / 10.0;
        for (j, m) in [3.0, -2.0].iter().enumerate() {
            let mean = ds.points().rows().map(|r| r[j]).sum::<f64>() / 100.0;
            assert!((mean - m).abs() < bound, "coordinate {j}: {mean}");
        }
    }

    #[test]
    fn mixture_spec_validation() {
        let mut spec = GaussScenario::Balanced.spec(10, 0);
        assert!(spec.validate().is_ok());
        spec.components[0].std = 0.0;
        assert!(spec.validate().is_err());
        let mut spec = GaussScenario::Balanced.spec(10, 0);
        spec.components[0].weight = 0.5;
        assert!(spec.validate().is_err());
    }

    #[test]
    fn tiny_allocation_fails_after_budget() {
        let s = AllocationScenario::new(AllocationScenario::skewed_population(), 0.0, 20, 2, 1).unwrap();
        assert!(matches!(
            build_allocation_dataset(&s),
            Err(BsiError::Generation(_))
        ));
    }

    #[test]
    fn zero_share_is_rejected() {
        let p = Distribution::new(vec![0.5, 0.5, 0.0]).unwrap();
        assert!(AllocationScenario::new(p.clone(), 0.0, 100, 2, 0).is_ok());
        assert!(AllocationScenario::new(p, 1.0, 100, 2, 0).is_err());
    }
}
