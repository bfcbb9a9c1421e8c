//! Point matrices and labelled datasets.

use crate::error::{domain, Result};

/// Dense row-major `n x d` matrix of finite coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct PointMatrix {
    data: Vec<f64>,
    n: usize,
    d: usize,
}

impl PointMatrix {
    pub fn new(data: Vec<f64>, n: usize, d: usize) -> Result<Self> {
        if d == 0 {
            return domain("dimension must be at least 1");
        }
        if data.len() != n * d {
            return domain(format!("{} values cannot form a {n} x {d} matrix", data.len()));
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return domain(format!(
                "non-finite coordinate {} at row {}, column {}",
                data[i],
                i / d,
                i % d
            ));
        }
        Ok(Self { data, n, d })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let Some(first) = rows.first() else {
            return domain("no rows");
        };
        let d = first.as_ref().len();
        let mut data = Vec::with_capacity(rows.len() * d);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != d {
                return domain(format!("row {i} has {} columns, expected {d}", r.len()));
            }
            data.extend_from_slice(r);
        }
        Self::new(data, rows.len(), d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.d)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    /// Copies the listed rows into a new matrix (may be empty).
    pub fn select(&self, indices: &[usize]) -> PointMatrix {
        let mut data = Vec::with_capacity(indices.len() * self.d);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        PointMatrix {
            data,
            n: indices.len(),
            d: self.d,
        }
    }

    /// Applies `f` to every row in place. Panics if `f` produces non-finite values.
    pub fn map_rows(&self, mut f: impl FnMut(&[f64], &mut [f64])) -> PointMatrix {
        let mut data = vec![0.0; self.data.len()];
        for (src, dst) in self.data.chunks_exact(self.d).zip(data.chunks_exact_mut(self.d)) {
            f(src, dst);
        }
        assert!(data.iter().all(|v| v.is_finite()), "row map produced non-finite values");
        PointMatrix { data, n: self.n, d: self.d }
    }

    pub(crate) fn from_parts_unchecked(data: Vec<f64>, n: usize, d: usize) -> Self {
        debug_assert_eq!(data.len(), n * d);
        Self { data, n, d }
    }
}

/// Points with one 0-based cluster label each.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    points: PointMatrix,
    labels: Vec<usize>,
    k: usize,
}

impl LabeledDataset {
    pub fn new(points: PointMatrix, labels: Vec<usize>, k: usize) -> Result<Self> {
        if points.n() == 0 {
            return domain("dataset has no points");
        }
        if k == 0 {
            return domain("k must be positive");
        }
        if labels.len() != points.n() {
            return domain(format!(
                "{} labels for {} points",
                labels.len(),
                points.n()
            ));
        }
        if let Some(i) = labels.iter().position(|&l| l >= k) {
            return domain(format!("label {} at row {i} is outside 0..{k}", labels[i]));
        }
        Ok(Self { points, labels, k })
    }

    pub fn points(&self) -> &PointMatrix {
        &self.points
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn n(&self) -> usize {
        self.points.n()
    }

    pub fn d(&self) -> usize {
        self.points.d()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Row indices of each cluster, in ascending order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut members = vec![Vec::new(); self.k];
        for (i, &l) in self.labels.iter().enumerate() {
            members[l].push(i);
        }
        members
    }

    pub fn cluster_points(&self, cluster: usize) -> PointMatrix {
        let idx: Vec<usize> = self
            .labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == cluster)
            .map(|(i, _)| i)
            .collect();
        self.points.select(&idx)
    }

    /// Renames clusters: label `l` becomes `perm[l]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.k {
            return domain("permutation length differs from k");
        }
        let labels = self.labels.iter().map(|&l| perm[l]).collect();
        Self::new(self.points.clone(), labels, self.k)
    }

    pub fn with_points(&self, points: PointMatrix) -> Result<Self> {
        Self::new(points, self.labels.clone(), self.k)
    }

    pub fn into_parts(self) -> (PointMatrix, Vec<usize>, usize) {
        (self.points, self.labels, self.k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes_and_values() {
        assert!(PointMatrix::new(vec![1.0, 2.0, 3.0], 2, 2).is_err());
        assert!(PointMatrix::new(vec![1.0, f64::NAN], 1, 2).is_err());
        assert!(PointMatrix::new(vec![], 0, 0).is_err());
        assert!(PointMatrix::from_rows(&[vec![1.0], vec![1.0, 2.0]]).is_err());
    }

    #[test]
    fn dataset_validates_labels() {
        let pts = PointMatrix::from_rows(&[[0.0, 0.0], [1.0, 1.0]]).unwrap();
        assert!(LabeledDataset::new(pts.clone(), vec![0], 2).is_err());
        assert!(LabeledDataset::new(pts.clone(), vec![0, 2], 2).is_err());
        assert!(LabeledDataset::new(pts.clone(), vec![0, 1], 0).is_err());
        let ds = LabeledDataset::new(pts, vec![1, 0], 2).unwrap();
        assert_eq!(ds.members(), vec![vec![1], vec![0]]);
        assert_eq!(ds.cluster_points(1).row(0), &[0.0, 0.0]);
    }
}
