use bsi_core::{
    all_baselines, bsi, bsi_of_labeled_data, fit_restarts, geometric_distribution, kl_divergence,
    kmeans_fit, Distribution, GeometricMeasure, KMeansConfig, LabeledDataset, PointMatrix,
};
use proptest::prelude::*;

fn distribution(k: usize) -> impl Strategy<Value = Distribution> {
    prop::collection::vec(0.0f64..1.0, k).prop_filter_map("zero mass", |w| {
        let total: f64 = w.iter().sum();
        (total > 1e-6).then(|| Distribution::from_masses(&w).unwrap())
    })
}

fn pair() -> impl Strategy<Value = (Distribution, Distribution)> {
    (1usize..8).prop_flat_map(|k| (distribution(k), distribution(k)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn bsi_is_bounded_symmetric_and_one_at_equality((p, q) in pair()) {
        let pq = bsi(&p, &q).unwrap();
        let qp = bsi(&q, &p).unwrap();
        prop_assert!((0.0..=1.0).contains(&pq.bsi));
        prop_assert_eq!(pq.bsi, qp.bsi);
        prop_assert!((bsi(&p, &p).unwrap().bsi - 1.0).abs() < 1e-12);
        prop_assert_eq!(pq.bsi, 1.0 - pq.jsd_bits);
    }

    #[test]
    fn bsi_is_permutation_invariant((p, q) in pair(), seed in any::<u64>()) {
        let k = p.k();
        let mut perm: Vec<usize> = (0..k).collect();
        let mut s = seed;
        for i in (1..k).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let a = bsi(&p, &q).unwrap().bsi;
        let b = bsi(&p.permuted(&perm).unwrap(), &q.permuted(&perm).unwrap()).unwrap().bsi;
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn kl_is_nonnegative_with_full_support(
        (a, b) in (1usize..8).prop_flat_map(|k| (
            prop::collection::vec(0.01f64..1.0, k),
            prop::collection::vec(0.01f64..1.0, k),
        ))
    ) {
        let a = Distribution::from_masses(&a).unwrap();
        let b = Distribution::from_masses(&b).unwrap();
        prop_assert!(kl_divergence(&a, &b).unwrap() >= 0.0);
    }
}

fn labeled(d: usize) -> impl Strategy<Value = LabeledDataset> {
    (2usize..5)
        .prop_flat_map(move |k| (Just(k), k * (d + 1)..k * (d + 1) + 30))
        .prop_flat_map(move |(k, n)| {
        (
            prop::collection::vec(-5.0f64..5.0, n * d),
            prop::collection::vec(0..k, n),
            Just((k, n)),
        )
            .prop_map(move |(coords, mut labels, (k, n))| {
                // d + 1 guaranteed members per cluster so every volume is positive.
                for (i, l) in labels.iter_mut().enumerate().take(k * (d + 1)) {
                    *l = i % k;
                }
                LabeledDataset::new(PointMatrix::new(coords, n, d).unwrap(), labels, k).unwrap()
            })
        })
}

fn max_abs_diff(a: &Distribution, b: &Distribution) -> f64 {
    a.weights()
        .iter()
        .zip(b.weights())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn random_orthogonal(d: usize, seed: u64) -> Vec<Vec<f64>> {
    // Gram-Schmidt on a pseudo-random basis.
    let mut s = seed | 1;
    let mut next = || {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let mut basis: Vec<Vec<f64>> = Vec::new();
    while basis.len() < d {
        let mut v: Vec<f64> = (0..d).map(|_| next()).collect();
        for b in &basis {
            let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= dot * y);
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 {
            basis.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    basis
}

fn check_invariances(ds: &LabeledDataset, shift: f64, scale: f64, seed: u64) -> Result<(), TestCaseError> {
    let d = ds.d();
    let base = geometric_distribution(ds, GeometricMeasure::Spread).unwrap().distribution;

    let moved = ds.points().map_rows(|r, out| {
        for (j, (o, v)) in out.iter_mut().zip(r).enumerate() {
            *o = v + shift * (j as f64 + 1.0);
        }
    });
    let q = geometric_distribution(&ds.with_points(moved).unwrap(), GeometricMeasure::Spread).unwrap();
    prop_assert!(max_abs_diff(&base, &q.distribution) < 1e-10, "translation");

    let scaled = ds.points().map_rows(|r, out| out.iter_mut().zip(r).for_each(|(o, v)| *o = scale * v));
    let q = geometric_distribution(&ds.with_points(scaled).unwrap(), GeometricMeasure::Spread).unwrap();
    prop_assert!(max_abs_diff(&base, &q.distribution) < 1e-10, "scale");

    let rot = random_orthogonal(d, seed);
    let rotated = ds.points().map_rows(|r, out| {
        for (o, row) in out.iter_mut().zip(&rot) {
            *o = row.iter().zip(r).map(|(a, b)| a * b).sum();
        }
    });
    let q = geometric_distribution(&ds.with_points(rotated).unwrap(), GeometricMeasure::Spread).unwrap();
    prop_assert!(max_abs_diff(&base, &q.distribution) < 1e-8, "rotation");
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn geometry_invariances_2d(ds in labeled(2), shift in -100.0f64..100.0, scale in 0.01f64..100.0, seed in any::<u64>()) {
        check_invariances(&ds, shift, scale, seed)?;
    }

    #[test]
    fn geometry_invariances_4d(ds in labeled(4), shift in -100.0f64..100.0, scale in 0.01f64..100.0, seed in any::<u64>()) {
        check_invariances(&ds, shift, scale, seed)?;
    }

    #[test]
    fn relabeling_permutes_q_and_keeps_scores(ds in labeled(2)) {
        let k = ds.k();
        let perm: Vec<usize> = (0..k).rev().collect();
        let renamed = ds.relabeled(&perm).unwrap();
        let q = geometric_distribution(&ds, GeometricMeasure::Spread).unwrap().distribution;
        let q2 = geometric_distribution(&renamed, GeometricMeasure::Spread).unwrap().distribution;
        for i in 0..k {
            prop_assert!((q.weights()[i] - q2.weights()[perm[i]]).abs() < 1e-15);
        }
        let a = bsi_of_labeled_data(&ds).unwrap().bsi;
        let b = bsi_of_labeled_data(&renamed).unwrap().bsi;
        prop_assert!((a - b).abs() < 1e-12);
        let (x, y) = (all_baselines(&ds).unwrap(), all_baselines(&renamed).unwrap());
        prop_assert!((x.silhouette - y.silhouette).abs() < 1e-12);
        prop_assert!((x.calinski_harabasz - y.calinski_harabasz).abs() < 1e-9 * x.calinski_harabasz.abs().max(1.0));
        prop_assert!((x.davies_bouldin - y.davies_bouldin).abs() < 1e-12);
        prop_assert!((x.cluster_size_entropy_bits - y.cluster_size_entropy_bits).abs() < 1e-12);
    }

    #[test]
    fn baselines_are_rigid_motion_and_scale_invariant(ds in labeled(2), scale in 0.1f64..10.0, angle in 0.0f64..std::f64::consts::TAU) {
        let (c, s) = (angle.cos(), angle.sin());
        let moved = ds.points().map_rows(|r, out| {
            out[0] = scale * (c * r[0] - s * r[1]) + 3.0;
            out[1] = scale * (s * r[0] + c * r[1]) - 7.0;
        });
        let a = all_baselines(&ds).unwrap();
        let b = all_baselines(&ds.with_points(moved).unwrap()).unwrap();
        prop_assert!((a.silhouette - b.silhouette).abs() < 1e-9);
        prop_assert!((a.calinski_harabasz - b.calinski_harabasz).abs() < 1e-7 * a.calinski_harabasz.max(1.0));
        prop_assert!((a.davies_bouldin - b.davies_bouldin).abs() < 1e-9 * a.davies_bouldin.max(1.0));
    }

    #[test]
    fn size_entropy_is_bounded_by_log_k(labels in prop::collection::vec(0usize..4, 1..60)) {
        let h = bsi_core::cluster_size_entropy(&labels, 4).unwrap();
        prop_assert!(h <= 2.0 + 1e-12);
        let mut counts = [0; 4];
        labels.iter().for_each(|&l| counts[l] += 1);
        if counts.iter().all(|&c| c == counts[0]) {
            prop_assert!((h - 2.0).abs() < 1e-12);
        } else {
            prop_assert!(h < 2.0 - 1e-12);
        }
    }

    #[test]
    fn kmeans_inertia_never_increases(ds in labeled(2), k in 1usize..6, seed in any::<u64>()) {
        let cfg = KMeansConfig::new(k.min(ds.n())).seed(seed);
        let r = kmeans_fit(ds.points(), &cfg, 0).unwrap();
        for w in r.inertia_trace.windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 1e-12) + 1e-12, "{:?}", r.inertia_trace);
        }
        prop_assert!(r.cluster_sizes().iter().all(|&s| s > 0));
    }
}

#[test]
fn kmeans_is_deterministic() {
    let ds = bsi_core::sample_mixture(&bsi_core::GaussScenario::Imbalanced.spec(500, 4)).unwrap();
    let cfg = KMeansConfig::new(3).restarts(8).seed(99);
    let a = fit_restarts(ds.points(), &cfg).unwrap();
    let b = fit_restarts(ds.points(), &cfg).unwrap();
    assert_eq!(a, b);
}

#[test]
fn restarts_do_not_depend_on_each_other() {
    let ds = bsi_core::sample_mixture(&bsi_core::GaussScenario::Overlapping.spec(400, 2)).unwrap();
    let cfg = KMeansConfig::new(3).restarts(6).seed(5);
    let together = fit_restarts(ds.points(), &cfg).unwrap();
    // Running restarts individually and in reverse order gives the same multiset.
    let mut alone: Vec<_> = (0..6).rev().map(|r| kmeans_fit(ds.points(), &cfg, r).unwrap()).collect();
    alone.reverse();
    assert_eq!(together, alone);
    let key = |r: &bsi_core::ClusteringResult| (r.inertia.to_bits(), r.bsi_score.map(f64::to_bits));
    let mut a: Vec<_> = together.iter().map(key).collect();
    let mut b: Vec<_> = alone.iter().map(key).collect();
    a.sort();
    b.sort();
    assert_eq!(a, b);
}
