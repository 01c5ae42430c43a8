//! Parallel/sequential execution shims.
//!
//! Every data-parallel loop in the crate funnels through these helpers so the
//! `parallel` feature is a pure drop-in: all kernels are XOR/popcount
//! arithmetic with disjoint writes, so scheduling cannot change any result.
//! Small inputs stay on the sequential path even when rayon is enabled; the
//! fork-join overhead dwarfs the work below a few KiB of row data.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Rows below this many words are processed sequentially even with rayon.
#[cfg(feature = "parallel")]
const PAR_MIN_WORDS: usize = 1 << 13;

/// Visit every `width`-word row of `words`, passing the row index and a
/// mutable view of the row. Rows are disjoint, so this parallelizes cleanly.
#[cfg(feature = "parallel")]
pub(crate) fn for_each_row<F>(words: &mut [u64], width: usize, f: F)
where
    F: Fn(usize, &mut [u64]) + Sync + Send,
{
    if words.len() < PAR_MIN_WORDS {
        for (i, row) in words.chunks_mut(width).enumerate() {
            f(i, row);
        }
    } else {
        words
            .par_chunks_mut(width)
            .enumerate()
            .for_each(|(i, row)| f(i, row));
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn for_each_row<F>(words: &mut [u64], width: usize, f: F)
where
    F: Fn(usize, &mut [u64]) + Sync + Send,
{
    for (i, row) in words.chunks_mut(width).enumerate() {
        f(i, row);
    }
}

/// Map `f` over `items`, preserving order in the output.
#[cfg(feature = "parallel")]
pub(crate) fn map_collect<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_collect<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    items.into_iter().map(f).collect()
}
