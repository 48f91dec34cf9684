//! Execution policy for data-parallel loops.
//!
//! Hot loops (replications, permutation replicates, change-point scans) go
//! through [`map_indexed`], which runs on rayon when the `parallel` feature is
//! enabled and falls back to a plain sequential map otherwise. Results are
//! collected in index order and all floating-point reductions happen
//! sequentially afterwards, so outputs are identical for any thread count.

#[cfg(feature = "parallel")]
use std::sync::atomic::{AtomicBool, Ordering};

#[cfg(feature = "parallel")]
static FORCE_SEQUENTIAL: AtomicBool = AtomicBool::new(false);

/// Map `f` over `0..n`, preserving index order in the output.
pub fn map_indexed<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if !FORCE_SEQUENTIAL.load(Ordering::Relaxed) {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
    }
    map_indexed_seq(n, f)
}

/// Sequential reference path, always available (used by the benchmark suite
/// to compare against the rayon path).
pub fn map_indexed_seq<R, F>(n: usize, mut f: F) -> Vec<R>
where
    F: FnMut(usize) -> R,
{
    (0..n).map(&mut f).collect()
}

/// Run `f` with parallel dispatch disabled, regardless of feature flags.
pub fn with_sequential<R>(f: impl FnOnce() -> R) -> R {
    #[cfg(feature = "parallel")]
    {
        let prev = FORCE_SEQUENTIAL.swap(true, Ordering::Relaxed);
        let out = f();
        FORCE_SEQUENTIAL.store(prev, Ordering::Relaxed);
        out
    }
    #[cfg(not(feature = "parallel"))]
    f()
}

/// Configure the global worker pool. `0` keeps the default. Returns quietly
/// if a pool was already installed.
pub fn configure_threads(threads: usize) {
    #[cfg(feature = "parallel")]
    {
        if threads > 0 {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global();
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
}
