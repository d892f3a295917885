//! Data-parallel execution helpers.
//!
//! Every heavy loop in the crate is expressed as an ordered map over
//! independent items followed by a sequential, order-preserving reduction.
//! With the `parallel` feature the map runs on the current rayon pool;
//! without it (or with [`Exec::Sequential`]) it runs on the calling thread.
//! Results are identical in both modes because reductions never depend on
//! scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Execution strategy for the data-parallel kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Map `f` over `items`, preserving order.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().map(f).collect(),
            _ => items.iter().map(f).collect(),
        }
    }

    /// Map `f` over consecutive chunks `[lo, hi)` covering `[start, end)`.
    pub fn map_chunks<R, F>(self, start: u64, end: u64, chunk: u64, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(u64, u64) -> R + Sync + Send,
    {
        let chunk = chunk.max(1);
        let mut bounds = Vec::new();
        let mut lo = start;
        while lo < end {
            let hi = lo.saturating_add(chunk).min(end);
            bounds.push((lo, hi));
            lo = hi;
        }
        self.map(&bounds, |&(lo, hi)| f(lo, hi))
    }

    /// Sum of `f(lo, hi)` over chunks; integer sums are schedule independent.
    pub fn sum_chunks<F>(self, start: u64, end: u64, chunk: u64, f: F) -> u64
    where
        F: Fn(u64, u64) -> u64 + Sync + Send,
    {
        self.map_chunks(start, end, chunk, f).into_iter().sum()
    }
}

/// Run `f` on a dedicated pool with `threads` workers.
///
/// Falls back to a direct call when the `parallel` feature is disabled.
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        match rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
        {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        f()
    }
}
