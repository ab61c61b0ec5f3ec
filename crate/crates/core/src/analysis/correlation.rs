//! Correlation between pairwise distances in feature space and label space.

use ndarray::ArrayView2;
use serde::Serialize;

use crate::distance::{check_pool, euclidean, row};
use crate::{seed, Error, Result};

/// Coefficients with magnitude at or below this are negligible.
pub const NEGLIGIBLE_THRESHOLD: f64 = 0.1;
/// Pair budget above which pairs are subsampled.
pub const DEFAULT_MAX_PAIRS: usize = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Negligible,
    Positive,
    Negative,
}

impl Verdict {
    pub fn of(rho: f64) -> Self {
        if rho.abs() <= NEGLIGIBLE_THRESHOLD {
            Verdict::Negligible
        } else if rho > 0.0 {
            Verdict::Positive
        } else {
            Verdict::Negative
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub pearson: f64,
    pub spearman: f64,
    pub pair_count: usize,
    pub subsampled: bool,
    /// Verdict on the Pearson coefficient.
    pub verdict: Verdict,
    pub spearman_verdict: Verdict,
}

fn moments(a: &[f64], b: &[f64]) -> (f64, f64, f64) {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    (sab, saa, sbb)
}

/// Pearson's correlation coefficient, `None` when either side has zero variance.
pub fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    assert_eq!(a.len(), b.len());
    let (sab, saa, sbb) = moments(a, b);
    if saa == 0.0 || sbb == 0.0 {
        return None;
    }
    Some((sab / (saa.sqrt() * sbb.sqrt())).clamp(-1.0, 1.0))
}

/// 1-based ranks; tied values share the average of their positions.
fn average_ranks(v: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&i, &j| v[i].total_cmp(&v[j]));
    let mut ranks = vec![0.0; v.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && v[order[end]] == v[order[start]] {
            end += 1;
        }
        let avg = (start + end + 1) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = avg;
        }
        start = end;
    }
    ranks
}

/// Spearman's rank correlation: Pearson on average ranks.
pub fn spearman(a: &[f64], b: &[f64]) -> Option<f64> {
    pearson(&average_ranks(a), &average_ranks(b))
}

fn pair_total(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Sorted linear indices of `amount` distinct pairs out of `total`.
fn sampled_pairs(total: usize, amount: usize, seed: u64) -> Vec<usize> {
    let mut picks = rand::seq::index::sample(&mut seed::rng(seed), total, amount).into_vec();
    picks.sort_unstable();
    picks
}

/// Visit pairs `(i, j)`, `i < j`, whose row-major linear index appears in
/// `sorted` (or all pairs when `None`).
fn for_pairs(n: usize, sorted: Option<&[usize]>, mut visit: impl FnMut(usize, usize)) {
    match sorted {
        None => {
            for i in 0..n {
                for j in i + 1..n {
                    visit(i, j);
                }
            }
        }
        Some(ks) => {
            let (mut i, mut row_start) = (0usize, 0usize);
            for &k in ks {
                while k >= row_start + (n - i - 1) {
                    row_start += n - i - 1;
                    i += 1;
                }
                visit(i, i + 1 + (k - row_start));
            }
        }
    }
}

fn distance_pairs(x: &ArrayView2<'_, f64>, y: &[f64], sorted: Option<&[usize]>) -> (Vec<f64>, Vec<f64>) {
    let cap = sorted.map_or(pair_total(x.nrows()), <[usize]>::len);
    let mut dx = Vec::with_capacity(cap);
    let mut dy = Vec::with_capacity(cap);
    for_pairs(x.nrows(), sorted, |i, j| {
        dx.push(euclidean(row(x, i), row(x, j)));
        dy.push((y[i] - y[j]).abs());
    });
    (dx, dy)
}

fn report(dx: &[f64], dy: &[f64], subsampled: bool) -> Result<CorrelationReport> {
    let p = pearson(dx, dy);
    let s = spearman(dx, dy);
    let (Some(pearson), Some(spearman)) = (p, s) else {
        let which = if moments(dx, dx).1 == 0.0 {
            "all pairwise feature distances are identical"
        } else {
            "all pairwise label distances are identical"
        };
        return Err(Error::Degenerate(format!("correlation undefined: {which}")));
    };
    Ok(CorrelationReport {
        pearson,
        spearman,
        pair_count: dx.len(),
        subsampled,
        verdict: Verdict::of(pearson),
        spearman_verdict: Verdict::of(spearman),
    })
}

/// Pearson and Spearman correlation between `|x_i - x_j|` and `|y_i - y_j|`
/// over all pairs, or over `max_pairs` seeded pairs when there are more.
pub fn pairwise_distance_correlation(
    x: ArrayView2<'_, f64>,
    y: &[f64],
    max_pairs: usize,
    seed: u64,
) -> Result<CorrelationReport> {
    check_pool(&x)?;
    let n = x.nrows();
    if y.len() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: y.len() });
    }
    if n < 3 {
        return Err(Error::InvalidArgument("need at least three points".into()));
    }
    if max_pairs == 0 {
        return Err(Error::InvalidArgument("max_pairs must be positive".into()));
    }
    let total = pair_total(n);
    if total <= max_pairs {
        let (dx, dy) = distance_pairs(&x, y, None);
        report(&dx, &dy, false)
    } else {
        let ks = sampled_pairs(total, max_pairs, seed);
        let (dx, dy) = distance_pairs(&x, y, Some(&ks));
        report(&dx, &dy, true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;
    use proptest::prelude::*;
    use rand::Rng;

    fn column(xs: &[f64]) -> Array2<f64> {
        Array2::from_shape_vec((xs.len(), 1), xs.to_vec()).unwrap()
    }

    #[test]
    fn linear_labels_correlate_perfectly() {
        let xs: Vec<f64> = (0..30).map(|i| (i as f64 * 0.77).sin() * 4.0).collect();
        let y: Vec<f64> = xs.iter().map(|x| 2.0 * x + 3.0).collect();
        let r = pairwise_distance_correlation(column(&xs).view(), &y, DEFAULT_MAX_PAIRS, 0).unwrap();
        assert!((r.pearson - 1.0).abs() <= 1e-12);
        assert!((r.spearman - 1.0).abs() <= 1e-12);
        assert_eq!(r.pair_count, 435);
        assert!(!r.subsampled);
        assert_eq!(r.verdict, Verdict::Positive);
    }

    #[test]
    fn monotone_labels_have_unit_spearman() {
        let xs: Vec<f64> = (0..25).map(|i| i as f64 * 0.2).collect();
        let y: Vec<f64> = xs.iter().map(|x| x.powi(3)).collect();
        let r = pairwise_distance_correlation(column(&xs).view(), &y, DEFAULT_MAX_PAIRS, 0).unwrap();
        // |x_i^3 - x_j^3| is not a monotone function of |x_i - x_j| in general,
        // so check rank invariance directly on the distance sequences instead.
        assert!(r.pearson <= 1.0);
        let a: Vec<f64> = (0..40).map(|i| (i as f64 * 1.3).cos() + i as f64 * 0.01).collect();
        let b: Vec<f64> = a.iter().map(|v| v.exp()).collect();
        assert!((spearman(&a, &b).unwrap() - 1.0).abs() <= 1e-12);
        assert!(pearson(&a, &b).unwrap() < 1.0);
    }

    #[test]
    fn ties_get_average_ranks() {
        assert_eq!(average_ranks(&[3.0, 1.0, 3.0, 2.0]), vec![3.5, 1.0, 3.5, 2.0]);
    }

    #[test]
    fn verdict_threshold() {
        assert_eq!(Verdict::of(0.1), Verdict::Negligible);
        assert_eq!(Verdict::of(-0.1), Verdict::Negligible);
        assert_eq!(Verdict::of(0.1000001), Verdict::Positive);
        assert_eq!(Verdict::of(-0.2), Verdict::Negative);
    }

    #[test]
    fn degenerate_inputs_rejected() {
        // constant labels: every label distance is zero
        let err = pairwise_distance_correlation(column(&[0.0, 1.0, 3.0]).view(), &[2.0; 3], 10, 0);
        assert!(matches!(err, Err(Error::Degenerate(_))));
        assert!(pairwise_distance_correlation(column(&[0.0, 1.0]).view(), &[0.0, 1.0], 10, 0).is_err());
    }

    #[test]
    fn subsampled_path_with_every_pair_equals_exact() {
        let mut r = crate::seed::rng(4);
        for n in [3usize, 17, 120, 200] {
            let x = Array2::from_shape_simple_fn((n, 3), || r.random::<f64>());
            let y: Vec<f64> = (0..n).map(|_| r.random::<f64>()).collect();
            let total = pair_total(n);
            let ks = sampled_pairs(total, total, 99);
            assert_eq!(ks, (0..total).collect::<Vec<_>>());
            let (ex, ey) = distance_pairs(&x.view(), &y, None);
            let (sx, sy) = distance_pairs(&x.view(), &y, Some(&ks));
            let exact = report(&ex, &ey, false).unwrap();
            let sampled = report(&sx, &sy, true).unwrap();
            assert_eq!(exact.pearson.to_bits(), sampled.pearson.to_bits());
            assert_eq!(exact.spearman.to_bits(), sampled.spearman.to_bits());
        }
    }

    #[test]
    fn subsampling_kicks_in_above_budget() {
        let xs: Vec<f64> = (0..100).map(|i| i as f64).collect();
        let y: Vec<f64> = xs.iter().map(|v| v * 0.5).collect();
        let r = pairwise_distance_correlation(column(&xs).view(), &y, 1000, 3).unwrap();
        assert!(r.subsampled);
        assert_eq!(r.pair_count, 1000);
        assert!((r.pearson - 1.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn coefficients_bounded_and_rank_invariant(
            a in proptest::collection::vec(-100.0f64..100.0, 3..40),
            shift in -5.0f64..5.0,
        ) {
            let b: Vec<f64> = a.iter().enumerate().map(|(i, v)| (v * 0.3 + i as f64).sin()).collect();
            if let (Some(p), Some(s)) = (pearson(&a, &b), spearman(&a, &b)) {
                prop_assert!((-1.0..=1.0).contains(&p));
                prop_assert!((-1.0..=1.0).contains(&s));
                let t: Vec<f64> = a.iter().map(|v| (v / 50.0).exp() + shift).collect();
                prop_assert_eq!(s, spearman(&t, &b).unwrap());
            }
        }
    }
}
