use nalgebra::{DMatrix, SymmetricEigen};
use ndarray::{Array2, ArrayView2};
use serde::Serialize;

use super::kernel::gaussian_kernel_matrix;
use crate::selection::separation_distance;
use crate::{Error, Result};

/// Spectrum summary of a symmetric matrix. `cond` is `None` when the matrix
/// is numerically singular: `lambda_min <= b * eps * lambda_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Conditioning {
    pub cond: Option<f64>,
    pub lambda_max: f64,
    pub lambda_min: f64,
}

impl Conditioning {
    pub fn is_singular(&self) -> bool {
        self.cond.is_none()
    }

    /// Condition number, with singular matrices mapped to infinity.
    pub fn value(&self) -> f64 {
        self.cond.unwrap_or(f64::INFINITY)
    }
}

const SYMMETRY_TOL: f64 = 1e-12;

pub fn condition_number(k: ArrayView2<'_, f64>) -> Result<Conditioning> {
    let (b, c) = k.dim();
    if b != c {
        return Err(Error::DimensionMismatch { expected: b, actual: c });
    }
    if b == 0 {
        return Err(Error::Empty("empty matrix".into()));
    }
    if k.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite matrix entry".into()));
    }
    let scale = k.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for i in 0..b {
        for j in 0..i {
            let diff = (k[[i, j]] - k[[j, i]]).abs();
            if diff > SYMMETRY_TOL * scale {
                return Err(Error::NotSymmetric { row: i, col: j, diff });
            }
        }
    }
    let m = DMatrix::from_fn(b, b, |i, j| k[[i, j]]);
    let eig = SymmetricEigen::new(m).eigenvalues;
    let lambda_max = eig.max();
    let lambda_min = eig.min();
    let tol = b as f64 * f64::EPSILON * lambda_max.abs();
    let cond = (lambda_min > tol).then(|| lambda_max / lambda_min);
    Ok(Conditioning { cond, lambda_max, lambda_min })
}

/// Spectral bounds for a Gaussian kernel matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenBounds {
    /// `b * max |K[q, r]|`, an upper bound on the largest eigenvalue.
    pub upper: f64,
    /// `C_d (2 gamma)^(-d/2) exp(-40.71 d^2 / (s^2 gamma)) s^(-d)`, the
    /// separation-distance lower bound on the smallest eigenvalue.
    pub lower: f64,
    /// Natural log of `lower`; finite even when `lower` underflows.
    pub ln_lower: f64,
}

pub fn eigen_bounds(k: ArrayView2<'_, f64>, sep: f64, gamma: f64, d: usize, c_d: f64) -> Result<EigenBounds> {
    if !(sep.is_finite() && sep > 0.0) {
        return Err(Error::InvalidArgument(format!("separation distance must be > 0, got {sep}")));
    }
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::InvalidArgument(format!("gamma must be > 0, got {gamma}")));
    }
    if !(c_d.is_finite() && c_d > 0.0) {
        return Err(Error::InvalidArgument(format!("C_d must be > 0, got {c_d}")));
    }
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let b = k.nrows();
    let max_entry = k.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let d = d as f64;
    let ln_lower = c_d.ln() - 0.5 * d * (2.0 * gamma).ln() - 40.71 * d * d / (sep * sep * gamma) - d * sep.ln();
    Ok(EigenBounds { upper: b as f64 * max_entry, lower: ln_lower.exp(), ln_lower })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowerBoundParams {
    pub d: usize,
    pub gamma: f64,
    pub c_d: f64,
}

/// Conditioning of the kernel matrix of a training set, with and without
/// the ridge term, next to the eigenvalue bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditioningReport {
    pub cond_regularized: Option<f64>,
    pub cond_unregularized: Option<f64>,
    pub lambda_max: f64,
    pub lambda_min: f64,
    pub sep_distance: f64,
    pub lambda_max_upper: f64,
    pub lambda_min_lower: Option<f64>,
    pub lower_bound_params: LowerBoundParams,
}

pub fn conditioning_report(
    train: ArrayView2<'_, f64>,
    gamma: f64,
    lambda: f64,
    c_d: f64,
) -> Result<ConditioningReport> {
    let k = gaussian_kernel_matrix(train, gamma)?;
    let plain = condition_number(k.view())?;
    let shifted: Array2<f64> = &k + &(Array2::<f64>::eye(k.nrows()) * lambda);
    let reg = condition_number(shifted.view())?;
    let all: Vec<usize> = (0..train.nrows()).collect();
    let sep = if all.len() >= 2 { separation_distance(train, &all)? } else { f64::INFINITY };
    let upper = k.nrows() as f64 * k.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let lower = if sep > 0.0 && sep.is_finite() {
        Some(eigen_bounds(k.view(), sep, gamma, train.ncols(), c_d)?.lower)
    } else {
        None
    };
    Ok(ConditioningReport {
        cond_regularized: reg.cond,
        cond_unregularized: plain.cond,
        lambda_max: plain.lambda_max,
        lambda_min: plain.lambda_min,
        sep_distance: sep,
        lambda_max_upper: upper,
        lambda_min_lower: lower,
        lower_bound_params: LowerBoundParams { d: train.ncols(), gamma, c_d },
    })
}
