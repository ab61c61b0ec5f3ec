use ndarray::{Array2, ArrayView2, Axis};
use rayon::prelude::*;

use crate::distance::{check_pool, row, sq_euclidean};
use crate::{Error, Result};

pub(crate) fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::InvalidArgument(format!("gamma must be finite and > 0, got {gamma}")));
    }
    Ok(())
}

/// `K[q, r] = exp(-gamma |x_q - x_r|^2)`. Symmetric with a unit diagonal.
pub fn gaussian_kernel_matrix(x: ArrayView2<'_, f64>, gamma: f64) -> Result<Array2<f64>> {
    check_gamma(gamma)?;
    check_pool(&x)?;
    let b = x.nrows();
    let mut k = Array2::zeros((b, b));
    k.axis_iter_mut(Axis(0)).into_par_iter().enumerate().for_each(|(q, mut out)| {
        for r in 0..b {
            // evaluate each unordered pair with the lower index first so K is exactly symmetric
            let (lo, hi) = if q <= r { (q, r) } else { (r, q) };
            out[r] = (-gamma * sq_euclidean(row(&x, lo), row(&x, hi))).exp();
        }
    });
    Ok(k)
}

/// `K[i, j] = exp(-gamma |a_i - b_j|^2)` between two row sets.
pub fn cross_kernel(a: ArrayView2<'_, f64>, b: ArrayView2<'_, f64>, gamma: f64) -> Result<Array2<f64>> {
    check_gamma(gamma)?;
    check_pool(&a)?;
    check_pool(&b)?;
    if a.ncols() != b.ncols() {
        return Err(Error::DimensionMismatch { expected: b.ncols(), actual: a.ncols() });
    }
    let mut k = Array2::zeros((a.nrows(), b.nrows()));
    k.axis_iter_mut(Axis(0)).into_par_iter().enumerate().for_each(|(i, mut out)| {
        for j in 0..b.nrows() {
            out[j] = (-gamma * sq_euclidean(row(&a, i), row(&b, j))).exp();
        }
    });
    Ok(k)
}

/// Lipschitz constant of `r -> exp(-gamma r^2)` on `r >= 0`.
///
/// The derivative magnitude `2 gamma r exp(-gamma r^2)` peaks at
/// `r = 1 / sqrt(2 gamma)`, giving `sqrt(2 gamma) exp(-1/2)`.
pub fn kernel_lipschitz(gamma: f64) -> f64 {
    (2.0 * gamma).sqrt() * (-0.5f64).exp()
}
