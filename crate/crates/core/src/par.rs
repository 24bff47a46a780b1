//! Block-parallel execution with a sequential fallback.
//!
//! Every parallel kernel in the crate splits its index range into blocks of
//! a fixed size and combines the per-block results in block order. Block
//! boundaries never depend on the thread count, so results are identical
//! under any pool size and with the `parallel` feature switched off.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How a kernel should run its blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Uses the ambient rayon pool. Identical to `Sequential` when the
    /// crate is built without the `parallel` feature.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// Splits `range` into consecutive blocks of `block` indices (the last one
/// possibly shorter).
pub fn blocks(range: Range<u64>, block: u64) -> Vec<Range<u64>> {
    assert!(block > 0);
    let mut out = Vec::new();
    let mut lo = range.start;
    while lo < range.end {
        let hi = range.end.min(lo.saturating_add(block));
        out.push(lo..hi);
        lo = hi;
    }
    out
}

/// Applies `f` to every block and returns the results in block order.
pub fn map_blocks<T, F>(exec: Execution, range: Range<u64>, block: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<u64>) -> T + Sync + Send,
{
    let parts = blocks(range, block);
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => parts.into_par_iter().map(f).collect(),
        _ => parts.into_iter().map(f).collect(),
    }
}

/// Runs `f` on disjoint mutable chunks of `data`, passing the offset of each
/// chunk.
pub fn for_each_chunk_mut<T, F>(exec: Execution, data: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    assert!(chunk > 0);
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => data
            .par_chunks_mut(chunk)
            .enumerate()
            .for_each(|(i, c)| f(i * chunk, c)),
        _ => data
            .chunks_mut(chunk)
            .enumerate()
            .for_each(|(i, c)| f(i * chunk, c)),
    }
}
