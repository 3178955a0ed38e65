//! Data-parallel helpers. With the `parallel` feature (default) these fan out
//! over rayon; without it they run sequentially. Both paths preserve input
//! order, so results are identical regardless of feature or thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over a slice, preserving order.
pub(crate) fn map_slice<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Flat-map `f` over an inclusive integer range, concatenating in range order.
pub(crate) fn flat_map_range<U, F>(lo: u64, hi: u64, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(u64) -> Vec<U> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (lo..=hi).into_par_iter().flat_map_iter(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (lo..=hi).flat_map(f).collect()
    }
}

/// True when the `parallel` feature is compiled in. Benchmarks use this to
/// label measurements from the two build modes.
pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}
