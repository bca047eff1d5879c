//! Data-parallel map with a sequential fallback.
//!
//! With the `parallel` feature the closure runs on the current rayon pool;
//! without it, items are processed in order on the calling thread. Output
//! order always matches input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub(crate) fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

/// Whether this build evaluates batches concurrently.
pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
