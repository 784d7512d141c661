mod common;

use ballmapper::pointcloud::{nearest_rank_percentile, winsorize_with_bounds};
use ballmapper::{correlation_matrix, normalize_minmax, winsorize};
use common::cloud;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn column() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1e3..1e3f64, 2..200)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn normalize_is_idempotent_and_bounded(col in column()) {
        let c = cloud(col.iter().map(|&v| vec![v]).collect());
        let once = normalize_minmax(&c).unwrap();
        let twice = normalize_minmax(&once).unwrap();
        for (a, b) in once.points().iter().zip(twice.points()) {
            prop_assert!((0.0..=1.0).contains(&a[0]));
            prop_assert!((a[0] - b[0]).abs() <= 1e-12);
        }
    }

    #[test]
    fn winsorized_values_stay_in_percentile_bounds(col in column(), lo in 0.0..20.0f64, width in 1.0..80.0f64) {
        let hi = (lo + width).min(100.0);
        let c = cloud(col.iter().map(|&v| vec![v]).collect());
        let (w, bounds) = winsorize_with_bounds(&c, lo, hi).unwrap();
        let mut sorted = col.clone();
        sorted.sort_by(f64::total_cmp);
        // nearest-rank oracle
        let rank = |p: f64| ((p / 100.0 * sorted.len() as f64).ceil() as usize).max(1) - 1;
        let (l, u) = (sorted[rank(lo)], sorted[rank(hi)]);
        prop_assert_eq!(bounds.bounds[0], (l, u));
        prop_assert_eq!(nearest_rank_percentile(&sorted, lo), l);
        for (orig, p) in col.iter().zip(w.points()) {
            prop_assert!(p[0] >= l && p[0] <= u);
            if *orig >= l && *orig <= u {
                prop_assert_eq!(p[0], *orig);
            }
        }
        // clamping is idempotent
        let again = winsorize(&w, lo, hi).unwrap();
        prop_assert!(again.points().iter().all(|p| p[0] >= l && p[0] <= u));
    }

    #[test]
    fn correlation_is_symmetric_and_psd(
        rows in prop::collection::vec(prop::collection::vec(-5.0..5.0f64, 4), 3..60)
    ) {
        let c = cloud(rows);
        let m = correlation_matrix(&c, &[]).unwrap();
        let k = m.labels.len();
        let defined: Vec<usize> = (0..k).filter(|&i| m.get(i, i).is_some()).collect();
        for &i in &defined {
            prop_assert!((m.get(i, i).unwrap() - 1.0).abs() <= 1e-12);
            for &j in &defined {
                let v = m.get(i, j).unwrap();
                prop_assert!((-1.0..=1.0).contains(&v));
                prop_assert_eq!(v, m.get(j, i).unwrap());
            }
        }
        let sub = DMatrix::from_fn(defined.len(), defined.len(), |a, b| m.get(defined[a], defined[b]).unwrap());
        let eig = sub.symmetric_eigen();
        prop_assert!(eig.eigenvalues.iter().all(|&l| l >= -1e-8), "{:?}", eig.eigenvalues);
    }
}

#[test]
fn constant_column_correlation_is_undefined() {
    let c = cloud(vec![vec![1.0, 0.0], vec![1.0, 1.0], vec![1.0, 2.0]]);
    let m = correlation_matrix(&c, &[]).unwrap();
    assert_eq!(m.get(0, 1), None);
    assert_eq!(m.get(1, 1), Some(1.0));
}
