use ndarray::{Axis, Zip};
use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::{Error, Result};

/// Per-column range recorded by [`minmax_normalize`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColumnRange {
    pub min: f64,
    pub max: f64,
}

/// Drop every column whose entries are all equal. Returns the reduced dataset
/// and the removed column indices in ascending order.
pub fn remove_zero_variance(ds: &Dataset) -> Result<(Dataset, Vec<usize>)> {
    let features = ds.features();
    let mut kept = Vec::new();
    let mut removed = Vec::new();
    for (j, col) in features.axis_iter(Axis(1)).enumerate() {
        let first = col[0];
        if col.iter().all(|&v| v == first) {
            removed.push(j);
        } else {
            kept.push(j);
        }
    }
    if kept.is_empty() {
        return Err(Error::Degenerate("every column has zero variance".into()));
    }
    if removed.is_empty() {
        return Ok((ds.clone(), removed));
    }
    let reduced = features.select(Axis(1), &kept);
    let names = ds.feature_names().map(|names| kept.iter().map(|&j| names[j].clone()).collect());
    let out = Dataset::new(reduced, ds.labels().map(<[f64]>::to_vec), names, ds.source.clone())?;
    Ok((out, removed))
}

/// Map each column affinely onto [0, 1] using its own min and max.
pub fn minmax_normalize(ds: &Dataset) -> Result<(Dataset, Vec<ColumnRange>)> {
    let mut features = ds.features().to_owned();
    let mut ranges = Vec::with_capacity(ds.d());
    for (j, mut col) in features.axis_iter_mut(Axis(1)).enumerate() {
        let min = col.iter().copied().fold(f64::INFINITY, f64::min);
        let max = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if min == max {
            return Err(Error::ConstantColumn(j));
        }
        let span = max - min;
        Zip::from(&mut col).for_each(|v| *v = (*v - min) / span);
        ranges.push(ColumnRange { min, max });
    }
    let out = Dataset::new(
        features,
        ds.labels().map(<[f64]>::to_vec),
        ds.feature_names().map(<[String]>::to_vec),
        ds.source.clone(),
    )?;
    Ok((out, ranges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{array, Array2};
    use proptest::prelude::*;

    fn ds(f: Array2<f64>) -> Dataset {
        Dataset::new(f, None, None, "t").unwrap()
    }

    #[test]
    fn removes_constant_column() {
        let d = ds(array![[5.0, 0.0], [5.0, 1.0], [5.0, 2.0]]);
        let (out, removed) = remove_zero_variance(&d).unwrap();
        assert_eq!(removed, vec![0]);
        assert_eq!(out.features(), array![[0.0], [1.0], [2.0]]);
    }

    #[test]
    fn identity_without_constant_columns() {
        let d = ds(array![[1.0, 0.0], [2.0, 1.0]]);
        let (out, removed) = remove_zero_variance(&d).unwrap();
        assert!(removed.is_empty());
        assert_eq!(out, d);
    }

    #[test]
    fn all_constant_rejected() {
        assert!(remove_zero_variance(&ds(array![[1.0, 2.0], [1.0, 2.0]])).is_err());
        // a single row is constant in every column
        assert!(remove_zero_variance(&ds(array![[1.0, 2.0]])).is_err());
    }

    #[test]
    fn normalize_examples() {
        let (out, ranges) = minmax_normalize(&ds(array![[0.0, -2.0], [5.0, 2.0], [10.0, 0.0]])).unwrap();
        assert_eq!(out.features(), array![[0.0, 0.0], [0.5, 1.0], [1.0, 0.5]]);
        assert_eq!(ranges[1], ColumnRange { min: -2.0, max: 2.0 });
        let unit = ds(array![[0.0], [1.0]]);
        assert_eq!(minmax_normalize(&unit).unwrap().0, unit);
        assert!(matches!(minmax_normalize(&ds(array![[1.0, 3.0], [2.0, 3.0]])), Err(Error::ConstantColumn(1))));
    }

    proptest! {
        #[test]
        fn normalize_attains_bounds_and_is_idempotent(
            vals in proptest::collection::vec(-1e6f64..1e6, 12),
        ) {
            let f = Array2::from_shape_vec((4, 3), vals).unwrap();
            let Ok((once, _)) = minmax_normalize(&ds(f)) else { return Ok(()); };
            for col in once.features().axis_iter(Axis(1)) {
                prop_assert!(col.iter().all(|&v| (0.0..=1.0).contains(&v)));
                prop_assert!(col.iter().any(|&v| v == 0.0));
                prop_assert!(col.iter().any(|&v| v == 1.0));
            }
            let (twice, _) = minmax_normalize(&once).unwrap();
            prop_assert_eq!(twice, once);
        }
    }
}
