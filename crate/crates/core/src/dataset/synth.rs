//! Synthetic pools with a known Lipschitz target and bounded label noise.
//!
//! Bulk points fill the unit cube; "tail" points sit outside it, far from the
//! bulk and from each other. Labels are `y = g . (x - c) + eta` with `c` the
//! cube centre, `|g| = target_lipschitz` and `eta` uniform on
//! `[-noise_level / 2, noise_level / 2]`, so any two labels differ from the
//! noiseless target by at most `noise_level` in total.

use ndarray::{Array1, Array2};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::{seed, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub n: usize,
    pub d: usize,
    pub target_lipschitz: f64,
    pub noise_level: f64,
    #[serde(default)]
    pub tail_fraction: f64,
    pub seed: u64,
}

/// Generated pool plus the exact generator constants.
#[derive(Debug, Clone)]
pub struct SynthDataset {
    pub dataset: Dataset,
    /// Gradient of the linear target.
    pub gradient: Array1<f64>,
    /// Intercept of the linear target.
    pub intercept: f64,
    /// Realized Lipschitz constant of the target, `|gradient|`.
    pub lipschitz: f64,
    /// Bound on the summed label deviation of any two points.
    pub noise_level: f64,
    /// Rows placed in the tail, ascending.
    pub tail_indices: Vec<usize>,
    /// Median nearest-neighbour distance of the bulk.
    pub bulk_median_nn: f64,
}

impl SynthDataset {
    /// Noiseless target value at `x`.
    pub fn target(&self, x: &[f64]) -> f64 {
        self.gradient.iter().zip(x).map(|(g, v)| g * v).sum::<f64>() + self.intercept
    }
}

/// Tail points sit at least this many bulk median spacings from every other point.
pub const TAIL_GAP: f64 = 6.0;
// bulk points farther than this many median spacings from a neighbour are re-placed
const BULK_ISOLATION: f64 = 2.0;

pub fn synth_lipschitz(cfg: &SynthConfig) -> Result<SynthDataset> {
    if !(cfg.target_lipschitz.is_finite() && cfg.target_lipschitz >= 0.0) {
        return Err(Error::InvalidArgument("target_lipschitz must be finite and >= 0".into()));
    }
    if !(cfg.noise_level.is_finite() && cfg.noise_level >= 0.0) {
        return Err(Error::InvalidArgument("noise_level must be finite and >= 0".into()));
    }
    if !(0.0..1.0).contains(&cfg.tail_fraction) {
        return Err(Error::InvalidArgument("tail_fraction must lie in [0, 1)".into()));
    }
    if cfg.d == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let expected_tail = cfg.n as f64 * cfg.tail_fraction;
    if cfg.tail_fraction > 0.0 && expected_tail < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "tail_fraction {} of {} points is less than one point",
            cfg.tail_fraction, cfg.n
        )));
    }
    let n_tail = expected_tail.round() as usize;
    let n_bulk = cfg.n.saturating_sub(n_tail);
    if n_bulk < 2 {
        return Err(Error::InvalidArgument("need at least two bulk points".into()));
    }
    let d = cfg.d;

    let mut rng = seed::rng_stream(cfg.seed, 0);
    let mut bulk = Array2::from_shape_simple_fn((n_bulk, d), || rng.random::<f64>());
    let median = declump(&mut bulk, &mut rng)?;

    // tails: outside the bulk's bounding sphere, mutually separated
    let center = vec![0.5; d];
    let bulk_radius = bulk
        .rows()
        .into_iter()
        .map(|r| crate::distance::euclidean(r.as_slice().expect("standard layout"), &center))
        .fold(0.0, f64::max);
    let gap = TAIL_GAP * median;
    let mut tails: Vec<Vec<f64>> = Vec::with_capacity(n_tail);
    let mut attempts = 0usize;
    while tails.len() < n_tail {
        attempts += 1;
        let widen = 1.0 + (attempts / 200) as f64;
        let dir = unit_vector(&mut rng, d);
        let radius = bulk_radius + gap * (1.0 + widen * rng.random::<f64>());
        let p: Vec<f64> = center.iter().zip(&dir).map(|(c, u)| c + radius * u).collect();
        if tails.iter().all(|t| crate::distance::euclidean(t, &p) >= gap) {
            tails.push(p);
        }
    }

    // interleave tails at seeded positions
    let mut is_tail = vec![false; cfg.n];
    for i in rand::seq::index::sample(&mut rng, cfg.n, n_tail) {
        is_tail[i] = true;
    }
    let mut features = Array2::zeros((cfg.n, d));
    let (mut b, mut t) = (0, 0);
    for (i, mut r) in features.rows_mut().into_iter().enumerate() {
        if is_tail[i] {
            r.assign(&Array1::from(tails[t].clone()));
            t += 1;
        } else {
            r.assign(&bulk.row(b));
            b += 1;
        }
    }

    let gradient = Array1::from(unit_vector(&mut rng, d)) * cfg.target_lipschitz;
    let intercept = -gradient.sum() * 0.5;
    let lipschitz = gradient.dot(&gradient).sqrt();
    let half = 0.5 * cfg.noise_level;
    let labels: Vec<f64> = features
        .rows()
        .into_iter()
        .map(|x| {
            let f = x.dot(&gradient) + intercept;
            let eta = if half > 0.0 { rng.random_range(-half..=half) } else { 0.0 };
            f + eta
        })
        .collect();

    let names = (0..d).map(|j| format!("x{j}")).collect();
    let dataset = Dataset::new(features, Some(labels), Some(names), format!("synth(seed={})", cfg.seed))?;
    Ok(SynthDataset {
        dataset,
        gradient,
        intercept,
        lipschitz,
        noise_level: cfg.noise_level,
        tail_indices: (0..cfg.n).filter(|&i| is_tail[i]).collect(),
        bulk_median_nn: median,
    })
}

fn unit_vector(rng: &mut seed::Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Move isolated bulk points next to well-connected ones until every bulk
/// nearest-neighbour distance is within `BULK_ISOLATION` medians. A new spot
/// keeps at least half a median from every other point, so the spacing never
/// collapses. Returns the final median.
fn declump(bulk: &mut Array2<f64>, rng: &mut seed::Rng) -> Result<f64> {
    let n = bulk.nrows();
    let d = bulk.ncols();
    let mut spot = vec![0.0; d];
    for _ in 0..100 {
        let nn = nearest_neighbours(bulk.view());
        let med = median(&nn);
        if med == 0.0 {
            return Err(Error::Degenerate("bulk points coincide".into()));
        }
        let isolated: Vec<usize> = (0..n).filter(|&i| nn[i] > BULK_ISOLATION * med).collect();
        if isolated.is_empty() {
            return Ok(med);
        }
        let anchors: Vec<usize> = (0..n).filter(|&i| nn[i] <= BULK_ISOLATION * med).collect();
        for &i in &isolated {
            for _ in 0..1000 {
                let anchor = anchors[rng.random_range(0..anchors.len())];
                let dir = unit_vector(rng, d);
                let step = med * rng.random_range(0.5..1.0);
                for j in 0..d {
                    spot[j] = bulk[[anchor, j]] + step * dir[j];
                }
                let crowded = (0..n).any(|q| {
                    q != i
                        && crate::distance::sq_euclidean(&spot, bulk.row(q).as_slice().expect("standard layout"))
                            < 0.25 * med * med
                });
                if !crowded {
                    bulk.row_mut(i).assign(&ndarray::ArrayView1::from(&spot[..]));
                    break;
                }
            }
        }
    }
    Err(Error::Degenerate("bulk spacing did not settle".into()))
}

fn nearest_neighbours(a: ndarray::ArrayView2<'_, f64>) -> Vec<f64> {
    let n = a.nrows();
    let mut best = vec![f64::INFINITY; n];
    for i in 0..n {
        for j in 0..i {
            let dd = crate::distance::sq_euclidean(crate::distance::row(&a, i), crate::distance::row(&a, j));
            best[i] = best[i].min(dd);
            best[j] = best[j].min(dd);
        }
    }
    best.into_iter().map(f64::sqrt).collect()
}
