//! Incremental min-distance cache shared by the samplers.
//!
//! For each pool row the cache keeps the squared distance to its nearest
//! selected row and which selected row that is. Adding a row `c` only needs to
//! revisit rows `x` whose nearest centre `a` satisfies `|c - a| < 2 |x - a|`;
//! all others cannot get closer by the triangle inequality. The skip test
//! carries a relative margin so it never skips a row the exhaustive update
//! would have changed, keeping results identical to the plain O(n) pass.

use ndarray::ArrayView2;
use rayon::prelude::*;

use crate::distance::{row, sq_euclidean};
use crate::parallel::MIN_PAR_ROWS;
use crate::{Error, Result};

// (1 + 5e-9)^2 < 1 + 1.1e-8
const SKIP_MARGIN: f64 = 1.0 + 1.1e-8;
const CHUNK: usize = 2048;

pub(crate) struct Coverage<'a> {
    pool: ArrayView2<'a, f64>,
    min_sq: Vec<f64>,
    nearest: Vec<u32>,
    selected: Vec<usize>,
    is_selected: Vec<bool>,
    center_sq: Vec<f64>,
    min_pair_sq: f64,
    fill_trace: Vec<f64>,
    sep_trace: Vec<f64>,
    farthest: Option<(usize, f64)>,
}

impl<'a> Coverage<'a> {
    pub(crate) fn new(pool: ArrayView2<'a, f64>) -> Result<Self> {
        crate::distance::check_pool(&pool)?;
        let n = pool.nrows();
        if n > u32::MAX as usize {
            return Err(Error::InvalidArgument("pool too large".into()));
        }
        Ok(Coverage {
            pool,
            min_sq: vec![f64::INFINITY; n],
            nearest: vec![0; n],
            selected: Vec::new(),
            is_selected: vec![false; n],
            center_sq: Vec::new(),
            min_pair_sq: f64::INFINITY,
            fill_trace: Vec::new(),
            sep_trace: Vec::new(),
            farthest: None,
        })
    }

    pub(crate) fn selected(&self) -> &[usize] {
        &self.selected
    }

    pub(crate) fn is_selected(&self, i: usize) -> bool {
        self.is_selected[i]
    }

    /// Unselected row farthest from the selection (smallest index on ties)
    /// and its distance. `None` before the first add or once every row is selected.
    pub(crate) fn farthest(&self) -> Option<(usize, f64)> {
        self.farthest.map(|(i, sq)| (i, sq.sqrt()))
    }

    pub(crate) fn add(&mut self, index: usize) -> Result<()> {
        let n = self.pool.nrows();
        if index >= n {
            return Err(Error::IndexOutOfRange { index, pool: n });
        }
        if self.is_selected[index] {
            return Err(Error::InvalidArgument(format!("index {index} selected twice")));
        }
        let pool = self.pool;
        let c = row(&pool, index);

        self.center_sq.clear();
        for &s in &self.selected {
            let sq = sq_euclidean(c, row(&pool, s));
            self.min_pair_sq = self.min_pair_sq.min(sq);
            self.center_sq.push(sq);
        }
        let slot = self.selected.len() as u32;
        self.selected.push(index);
        self.is_selected[index] = true;

        let center_sq = &self.center_sq;
        let is_selected = &self.is_selected;
        let update = |start: usize, min_sq: &mut [f64], nearest: &mut [u32]| -> Option<(usize, f64)> {
            let mut best: Option<(usize, f64)> = None;
            for (k, (m, a)) in min_sq.iter_mut().zip(nearest.iter_mut()).enumerate() {
                let i = start + k;
                let skip = m.is_finite() && center_sq[*a as usize] >= 4.0 * *m * SKIP_MARGIN;
                if !skip {
                    let sq = sq_euclidean(row(&pool, i), c);
                    if sq < *m {
                        *m = sq;
                        *a = slot;
                    }
                }
                if !is_selected[i] && best.is_none_or(|(_, b)| *m > b) {
                    best = Some((i, *m));
                }
            }
            best
        };

        let best = if n >= MIN_PAR_ROWS {
            self.min_sq
                .par_chunks_mut(CHUNK)
                .zip(self.nearest.par_chunks_mut(CHUNK))
                .enumerate()
                .map(|(k, (m, a))| update(k * CHUNK, m, a))
                .reduce(|| None, pick_farther)
        } else {
            update(0, &mut self.min_sq, &mut self.nearest)
        };
        self.farthest = best;

        self.fill_trace.push(best.map_or(0.0, |(_, sq)| sq.sqrt()));
        if self.selected.len() >= 2 {
            self.sep_trace.push(0.5 * self.min_pair_sq.sqrt());
        }
        Ok(())
    }

    pub(crate) fn into_traces(self) -> (Vec<f64>, Vec<f64>) {
        (self.fill_trace, self.sep_trace)
    }
}

/// Larger distance wins; equal distances go to the smaller index. Associative
/// and commutative, so any reduction tree gives the sequential answer.
fn pick_farther(a: Option<(usize, f64)>, b: Option<(usize, f64)>) -> Option<(usize, f64)> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => {
            if y.1 > x.1 || (y.1 == x.1 && y.0 < x.0) {
                Some(y)
            } else {
                Some(x)
            }
        }
    }
}
