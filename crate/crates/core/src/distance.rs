//! Euclidean distance kernels shared by every module.
//!
//! Squared distances use eight independent accumulators combined in a fixed
//! order, so results are bit-reproducible and the loop vectorizes.

use ndarray::ArrayView2;

use crate::{Error, Result};

#[inline]
pub fn sq_euclidean(a: &[f64], b: &[f64]) -> f64 {
    #[cfg(target_arch = "x86_64")]
    if std::arch::is_x86_feature_detected!("avx2") {
        // SAFETY: the CPU supports AVX2.
        return unsafe { sq_euclidean_avx2(a, b) };
    }
    sq_euclidean_portable(a, b)
}

/// The same loop compiled for 4-wide lanes. Lane k still accumulates exactly
/// the terms of accumulator k in the same order (no fused multiply-add), so
/// the result is bit-identical to the portable path.
#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2")]
unsafe fn sq_euclidean_avx2(a: &[f64], b: &[f64]) -> f64 {
    sq_euclidean_portable(a, b)
}

#[inline(always)]
fn sq_euclidean_portable(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0f64; 8];
    let ca = a.chunks_exact(8);
    let cb = b.chunks_exact(8);
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        for k in 0..8 {
            let t = x[k] - y[k];
            acc[k] += t * t;
        }
    }
    let mut sum = ((acc[0] + acc[4]) + (acc[1] + acc[5])) + ((acc[2] + acc[6]) + (acc[3] + acc[7]));
    for (x, y) in ra.iter().zip(rb) {
        let t = x - y;
        sum += t * t;
    }
    sum
}

#[inline]
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    sq_euclidean(a, b).sqrt()
}

/// Row `i` of a standard-layout matrix as a slice.
#[inline]
pub(crate) fn row<'a>(m: &'a ArrayView2<'_, f64>, i: usize) -> &'a [f64] {
    let d = m.ncols();
    &m.as_slice().expect("standard layout")[i * d..(i + 1) * d]
}

/// Reject pools the distance code cannot work with.
pub(crate) fn check_pool(pool: &ArrayView2<'_, f64>) -> Result<()> {
    if pool.nrows() == 0 || pool.ncols() == 0 {
        return Err(Error::Empty("pool has no rows or columns".into()));
    }
    if !pool.is_standard_layout() {
        return Err(Error::InvalidArgument("pool must be in row-major layout".into()));
    }
    if let Some(pos) = pool.iter().position(|v| !v.is_finite()) {
        let d = pool.ncols();
        return Err(Error::InvalidArgument(format!("non-finite value at row {}, column {}", pos / d, pos % d)));
    }
    Ok(())
}
