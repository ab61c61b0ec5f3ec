//! Datasets: the pool of feature vectors, optionally labelled.

mod coulomb;
mod csvio;
mod preprocess;
mod synth;

pub use coulomb::{coulomb_dataset, coulomb_matrix, nuclear_charge, parse_xyz, Molecule, XyzRecord};
pub use csvio::{load_dataset, save_dataset, LabelColumn};
pub use preprocess::{minmax_normalize, remove_zero_variance, ColumnRange};
pub use synth::{synth_lipschitz, SynthConfig, SynthDataset, TAIL_GAP};

use ndarray::{Array2, ArrayView2, Axis};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Array2<f64>,
    labels: Option<Vec<f64>>,
    feature_names: Option<Vec<String>>,
    pub source: String,
}

impl Dataset {
    /// Build a dataset, checking shape and finiteness.
    pub fn new(
        features: Array2<f64>,
        labels: Option<Vec<f64>>,
        feature_names: Option<Vec<String>>,
        source: impl Into<String>,
    ) -> Result<Self> {
        let (n, d) = features.dim();
        if n == 0 || d == 0 {
            return Err(Error::Empty(format!("dataset is {n}x{d}")));
        }
        if let Some(pos) = features.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite feature at row {}, column {}", pos / d, pos % d)));
        }
        if let Some(y) = &labels {
            if y.len() != n {
                return Err(Error::DimensionMismatch { expected: n, actual: y.len() });
            }
            if let Some(i) = y.iter().position(|v| !v.is_finite()) {
                return Err(Error::InvalidArgument(format!("non-finite label at row {i}")));
            }
        }
        if let Some(names) = &feature_names {
            if names.len() != d {
                return Err(Error::DimensionMismatch { expected: d, actual: names.len() });
            }
        }
        // Row access throughout the crate slices the backing buffer.
        let features =
            if features.is_standard_layout() { features } else { features.as_standard_layout().into_owned() };
        Ok(Dataset { features, labels, feature_names, source: source.into() })
    }

    pub fn n(&self) -> usize {
        self.features.nrows()
    }

    pub fn d(&self) -> usize {
        self.features.ncols()
    }

    pub fn features(&self) -> ArrayView2<'_, f64> {
        self.features.view()
    }

    pub fn labels(&self) -> Option<&[f64]> {
        self.labels.as_deref()
    }

    pub fn require_labels(&self) -> Result<&[f64]> {
        self.labels().ok_or(Error::MissingLabels)
    }

    pub fn feature_names(&self) -> Option<&[String]> {
        self.feature_names.as_deref()
    }

    /// Features, labels, feature names and source description.
    #[allow(clippy::type_complexity)]
    pub fn into_parts(self) -> (Array2<f64>, Option<Vec<f64>>, Option<Vec<String>>, String) {
        (self.features, self.labels, self.feature_names, self.source)
    }

    /// The rows at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Result<Dataset> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.n()) {
            return Err(Error::IndexOutOfRange { index: bad, pool: self.n() });
        }
        let features = self.features.select(Axis(0), indices);
        let labels = self.labels.as_ref().map(|y| indices.iter().map(|&i| y[i]).collect());
        Dataset::new(features, labels, self.feature_names.clone(), self.source.clone())
    }

    /// Indices not contained in `selected`, ascending.
    pub fn complement(&self, selected: &[usize]) -> Vec<usize> {
        let mut taken = vec![false; self.n()];
        for &i in selected {
            if i < taken.len() {
                taken[i] = true;
            }
        }
        (0..self.n()).filter(|&i| !taken[i]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn rejects_bad_shapes() {
        assert!(Dataset::new(Array2::zeros((0, 2)), None, None, "").is_err());
        assert!(Dataset::new(array![[1.0], [2.0]], Some(vec![1.0]), None, "").is_err());
        assert!(Dataset::new(array![[1.0], [f64::NAN]], None, None, "").is_err());
        assert!(Dataset::new(array![[1.0], [2.0]], Some(vec![1.0, f64::INFINITY]), None, "").is_err());
    }

    #[test]
    fn subset_and_complement() {
        let ds = Dataset::new(array![[0.0], [1.0], [2.0]], Some(vec![5.0, 6.0, 7.0]), None, "t").unwrap();
        let sub = ds.subset(&[2, 0]).unwrap();
        assert_eq!(sub.features(), array![[2.0], [0.0]]);
        assert_eq!(sub.labels().unwrap(), &[7.0, 5.0]);
        assert_eq!(ds.complement(&[2, 0]), vec![1]);
        assert!(ds.subset(&[3]).is_err());
    }

    #[test]
    fn fortran_layout_is_normalized() {
        let f = array![[1.0, 2.0], [3.0, 4.0]].reversed_axes();
        let ds = Dataset::new(f, None, None, "").unwrap();
        assert!(ds.features().is_standard_layout());
        assert_eq!(ds.features()[[0, 1]], 3.0);
    }
}
