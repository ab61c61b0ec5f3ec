//! Thread-count control. Library operations use the ambient rayon pool, so
//! callers bound parallelism by installing a sized pool around a call.

use crate::{Error, Result};

/// Run `f` inside a rayon pool with exactly `threads` workers.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Rows per parallel task; below this loops stay sequential.
pub(crate) const MIN_PAR_ROWS: usize = 4096;
