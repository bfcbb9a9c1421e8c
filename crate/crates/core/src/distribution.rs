//! Discrete probability vectors over cluster states.

use serde::Serialize;

use crate::error::{domain, BsiError, Result};

/// Inputs whose total differs from 1 by less than this are renormalised;
/// anything further off is rejected.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// A normalised probability vector over `k` cluster states.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Distribution {
    weights: Vec<f64>,
}

impl Distribution {
    /// Validates `weights` and renormalises away rounding noise.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return domain("a distribution needs at least one state");
        }
        if let Some(i) = weights.iter().position(|w| !w.is_finite() || *w < 0.0) {
            return domain(format!("weight {i} is {} (must be finite and >= 0)", weights[i]));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() >= NORMALIZATION_TOLERANCE {
            return domain(format!("weights sum to {total}, expected 1"));
        }
        let weights = weights.into_iter().map(|w| w / total).collect();
        Ok(Self { weights })
    }

    /// Normalises arbitrary nonnegative masses (counts, volumes) into a distribution.
    pub fn from_masses(masses: &[f64]) -> Result<Self> {
        if masses.is_empty() {
            return domain("a distribution needs at least one state");
        }
        if let Some(i) = masses.iter().position(|w| !w.is_finite() || *w < 0.0) {
            return domain(format!("mass {i} is {} (must be finite and >= 0)", masses[i]));
        }
        let total: f64 = masses.iter().sum();
        if total <= 0.0 {
            return domain("total mass is zero");
        }
        Ok(Self {
            weights: masses.iter().map(|m| m / total).collect(),
        })
    }

    pub fn uniform(k: usize) -> Result<Self> {
        if k == 0 {
            return domain("k must be positive");
        }
        Ok(Self {
            weights: vec![1.0 / k as f64; k],
        })
    }

    pub fn k(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn into_weights(self) -> Vec<f64> {
        self.weights
    }

    /// Indices of states with zero probability.
    pub fn zero_states(&self) -> Vec<usize> {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| **w == 0.0)
            .map(|(i, _)| i)
            .collect()
    }

    /// The same distribution with its states in `perm` order: `out[i] = self[perm[i]]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.k() {
            return domain("permutation length differs from k");
        }
        let mut seen = vec![false; self.k()];
        for &p in perm {
            if p >= self.k() || std::mem::replace(&mut seen[p], true) {
                return domain("not a permutation");
            }
        }
        Ok(Self {
            weights: perm.iter().map(|&p| self.weights[p]).collect(),
        })
    }

    /// Element-wise midpoint `(self + other) / 2`.
    pub fn midpoint(&self, other: &Self) -> Result<Self> {
        check_same_len(self, other)?;
        Ok(Self {
            weights: self
                .weights
                .iter()
                .zip(&other.weights)
                .map(|(a, b)| 0.5 * (a + b))
                .collect(),
        })
    }

    /// Shannon entropy in bits.
    pub fn entropy_bits(&self) -> f64 {
        self.weights
            .iter()
            .filter(|w| **w > 0.0)
            .map(|w| -w * w.log2())
            .sum()
    }
}

/// Histogram of labels, normalised.
#[derive(Debug, Clone, PartialEq)]
pub struct Frequencies {
    pub distribution: Distribution,
    pub counts: Vec<usize>,
}

impl Frequencies {
    /// Clusters that received no points. Legal, but worth reporting.
    pub fn empty_clusters(&self) -> Vec<usize> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, c)| **c == 0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn has_empty_clusters(&self) -> bool {
        self.counts.contains(&0)
    }
}

/// Normalised label histogram. Labels are 0-based ids in `0..k`.
pub fn frequency_distribution(labels: &[usize], k: usize) -> Result<Frequencies> {
    if k == 0 {
        return domain("k must be positive");
    }
    if labels.is_empty() {
        return domain("cannot build a frequency distribution from zero labels");
    }
    let mut counts = vec![0usize; k];
    for (i, &l) in labels.iter().enumerate() {
        if l >= k {
            return domain(format!("label {l} at position {i} is outside 0..{k}"));
        }
        counts[l] += 1;
    }
    let n = labels.len() as f64;
    let distribution = Distribution {
        weights: counts.iter().map(|&c| c as f64 / n).collect(),
    };
    Ok(Frequencies {
        distribution,
        counts,
    })
}

/// `sum a[i] log2(a[i] / b[i])`, with `0 log 0 = 0`.
///
/// Returns [`BsiError::DivergenceSupport`] when `a[i] > 0` and `b[i] == 0`
/// (the divergence is `+inf` there).
pub fn kl_divergence(a: &Distribution, b: &Distribution) -> Result<f64> {
    check_same_len(a, b)?;
    let mut total = 0.0;
    for (i, (&x, &y)) in a.weights.iter().zip(&b.weights).enumerate() {
        if x == 0.0 {
            continue;
        }
        if y == 0.0 {
            return Err(BsiError::DivergenceSupport { index: i });
        }
        total += x * (x / y).log2();
    }
    // Rounding can leave a tiny negative residue for a == b.
    Ok(total.max(0.0))
}

fn check_same_len(a: &Distribution, b: &Distribution) -> Result<()> {
    if a.k() != b.k() {
        return domain(format!("length mismatch: {} vs {}", a.k(), b.k()));
    }
    Ok(())
}
