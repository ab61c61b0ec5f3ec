use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};
use ndarray::{Array2, ArrayView2};
use serde::Serialize;

use super::kernel::{check_gamma, cross_kernel, gaussian_kernel_matrix, kernel_lipschitz};
use crate::dataset::Dataset;
use crate::{Error, Result};

/// Largest accepted relative residual `|(K + lambda I) alpha - y| / |y|`.
pub const RESIDUAL_TOL: f64 = 1e-8;

/// A fitted kernel ridge regression model. Immutable after fitting.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelModel {
    train_features: Array2<f64>,
    weights: Vec<f64>,
    gamma: f64,
    lambda: f64,
}

impl KernelModel {
    /// Assemble a model from parts, validating shapes and values.
    pub fn new(train_features: Array2<f64>, weights: Vec<f64>, gamma: f64, lambda: f64) -> Result<Self> {
        check_gamma(gamma)?;
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::InvalidArgument(format!("lambda must be finite and >= 0, got {lambda}")));
        }
        crate::distance::check_pool(&train_features.view())?;
        if weights.len() != train_features.nrows() {
            return Err(Error::DimensionMismatch { expected: train_features.nrows(), actual: weights.len() });
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidArgument("non-finite weight".into()));
        }
        Ok(KernelModel { train_features, weights, gamma, lambda })
    }

    pub fn train_features(&self) -> ArrayView2<'_, f64> {
        self.train_features.view()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Number of training rows.
    pub fn b(&self) -> usize {
        self.weights.len()
    }

    /// Feature dimension.
    pub fn d(&self) -> usize {
        self.train_features.ncols()
    }
}

/// Solve `(K + lambda I) alpha = y` by Cholesky factorization.
///
/// There is no jitter or pseudo-inverse fallback: if the factorization fails
/// or the solution misses the residual tolerance, the fit is rejected with the
/// smallest eigenvalue of the regularized matrix.
pub fn krr_fit(train: &Dataset, gamma: f64, lambda: f64) -> Result<KernelModel> {
    let y = train.require_labels()?;
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::InvalidArgument(format!("lambda must be finite and >= 0, got {lambda}")));
    }
    let k = gaussian_kernel_matrix(train.features(), gamma)?;
    let b = k.nrows();
    let mut a = DMatrix::from_fn(b, b, |i, j| k[[i, j]]);
    for i in 0..b {
        a[(i, i)] += lambda;
    }
    let rhs = DVector::from_column_slice(y);
    let ill = |a: &DMatrix<f64>| Error::IllConditioned {
        lambda,
        lambda_min: SymmetricEigen::new(a.clone()).eigenvalues.min(),
    };
    let Some(chol) = Cholesky::new(a.clone()) else {
        return Err(ill(&a));
    };
    let alpha = chol.solve(&rhs);
    let residual = (&a * &alpha - &rhs).norm();
    let scale = rhs.norm();
    if !residual.is_finite() || residual > RESIDUAL_TOL * scale {
        return Err(ill(&a));
    }
    KernelModel::new(train.features().to_owned(), alpha.iter().copied().collect(), gamma, lambda)
}

/// `y(x) = sum_j alpha_j k(x, x_j)` for every row of `x`.
pub fn krr_predict(model: &KernelModel, x: ArrayView2<'_, f64>) -> Result<Vec<f64>> {
    if x.ncols() != model.d() {
        return Err(Error::DimensionMismatch { expected: model.d(), actual: x.ncols() });
    }
    if x.nrows() == 0 {
        return Ok(Vec::new());
    }
    let x = x.as_standard_layout();
    let k = cross_kernel(x.view(), model.train_features(), model.gamma)?;
    Ok(k.rows().into_iter().map(|r| r.iter().zip(&model.weights).map(|(k, a)| k * a).sum()).collect())
}

/// Global Lipschitz constant bound `|alpha|_2 sqrt(b) L_k` with `L_k` the
/// Lipschitz constant of the kernel profile.
pub fn krr_lipschitz_bound(model: &KernelModel) -> f64 {
    let norm = model.weights.iter().map(|a| a * a).sum::<f64>().sqrt();
    norm * (model.b() as f64).sqrt() * kernel_lipschitz(model.gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn ds(x: Array2<f64>, y: Vec<f64>) -> Dataset {
        Dataset::new(x, Some(y), None, "t").unwrap()
    }

    #[test]
    fn single_point_scalar_solve() {
        let m = krr_fit(&ds(array![[0.3, 0.1]], vec![2.5]), 1.0, 0.0).unwrap();
        assert_eq!(m.weights(), &[2.5]);
    }

    #[test]
    fn two_points_interpolate() {
        let train = ds(array![[0.0], [1.0]], vec![1.0, -2.0]);
        let m = krr_fit(&train, 1.0, 0.0).unwrap();
        let p = krr_predict(&m, train.features()).unwrap();
        assert!((p[0] - 1.0).abs() <= 1e-8);
        assert!((p[1] + 2.0).abs() <= 2e-8);
    }

    #[test]
    fn duplicate_point_needs_regularization() {
        let train = ds(array![[0.0], [0.0], [1.0]], vec![1.0, 1.0, 0.0]);
        match krr_fit(&train, 1.0, 0.0) {
            Err(Error::IllConditioned { lambda, lambda_min }) => {
                assert_eq!(lambda, 0.0);
                assert!(lambda_min.abs() < 1e-12);
            }
            other => panic!("expected ill-conditioning, got {other:?}"),
        }
        assert!(krr_fit(&train, 1.0, 1e-6).is_ok());
    }

    #[test]
    fn missing_labels_and_bad_params() {
        let unl = Dataset::new(array![[0.0]], None, None, "").unwrap();
        assert!(matches!(krr_fit(&unl, 1.0, 0.0), Err(Error::MissingLabels)));
        let train = ds(array![[0.0]], vec![1.0]);
        assert!(krr_fit(&train, -1.0, 0.0).is_err());
        assert!(krr_fit(&train, 1.0, -1.0).is_err());
    }

    #[test]
    fn far_queries_decay() {
        let train = ds(array![[0.0], [0.5], [1.0]], vec![3.0, -1.0, 2.0]);
        let m = krr_fit(&train, 2.0, 1e-3).unwrap();
        // gamma * D^2 = 2 * 25 = 50 for D = 5 from the nearest training point
        let p = krr_predict(&m, array![[6.0], [-5.0]].view()).unwrap();
        let l1: f64 = m.weights().iter().map(|a| a.abs()).sum();
        for v in p {
            assert!(v.abs() <= l1 * (-50.0f64).exp());
        }
    }

    #[test]
    fn zero_weights_predict_zero() {
        let m = KernelModel::new(array![[0.0, 1.0], [1.0, 0.0]], vec![0.0, 0.0], 1.0, 0.0).unwrap();
        assert_eq!(krr_predict(&m, array![[0.2, 0.2], [5.0, 1.0]].view()).unwrap(), vec![0.0, 0.0]);
        assert_eq!(krr_lipschitz_bound(&m), 0.0);
        assert!(krr_predict(&m, array![[0.2]].view()).is_err());
    }

    #[test]
    fn single_weight_bound_is_kernel_constant() {
        let m = KernelModel::new(array![[0.0]], vec![1.0], 1.0, 0.0).unwrap();
        assert!((krr_lipschitz_bound(&m) - kernel_lipschitz(1.0)).abs() < 1e-15);
    }
}
