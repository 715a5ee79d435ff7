use std::ops::Range;

pub(crate) const CHUNK: usize = 64;

/// Applies `f` to consecutive index ranges of length `CHUNK` and returns the results in order,
/// so reductions over the output do not depend on the thread count.
pub(crate) fn map_chunks<R, F>(len: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(Range<usize>) -> R + Sync,
{
    let ranges: Vec<Range<usize>> = (0..len).step_by(CHUNK).map(|a| a..(a + CHUNK).min(len)).collect();
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        #[allow(clippy::redundant_closure)]
        ranges.into_par_iter().map(|r| f(r)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        ranges.into_iter().map(f).collect()
    }
}
