//! Fixed-order parallel helpers.
//!
//! Every reduction is split into `CHUNK`-sized blocks whose partial sums are
//! folded left to right, so the sequential and rayon paths produce the same
//! bits regardless of thread count.

use alloc::vec::Vec;

pub(crate) const CHUNK: usize = 4096;

/// Writes `f(i)` into `out[i]` for every index.
pub(crate) fn fill<F>(out: &mut [f64], f: F)
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        out.par_chunks_mut(CHUNK).enumerate().for_each(|(c, chunk)| {
            let base = c * CHUNK;
            for (k, slot) in chunk.iter_mut().enumerate() {
                *slot = f(base + k);
            }
        });
    }
    #[cfg(not(feature = "parallel"))]
    {
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = f(i);
        }
    }
}

/// Applies `f(i, &mut out[i])` to every slot.
pub(crate) fn update<F>(out: &mut [f64], f: F)
where
    F: Fn(usize, &mut f64) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        out.par_chunks_mut(CHUNK).enumerate().for_each(|(c, chunk)| {
            let base = c * CHUNK;
            for (k, slot) in chunk.iter_mut().enumerate() {
                f(base + k, slot);
            }
        });
    }
    #[cfg(not(feature = "parallel"))]
    {
        for (i, slot) in out.iter_mut().enumerate() {
            f(i, slot);
        }
    }
}

fn chunk_sum<F: Fn(usize) -> f64>(c: usize, n: usize, f: &F) -> f64 {
    let lo = c * CHUNK;
    let hi = (lo + CHUNK).min(n);
    let mut acc = 0.0;
    for i in lo..hi {
        acc += f(i);
    }
    acc
}

/// Deterministic `sum_{i < n} f(i)`.
pub(crate) fn sum_by<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let chunks = n.div_ceil(CHUNK);
    #[cfg(feature = "parallel")]
    let partials: Vec<f64> = {
        use rayon::prelude::*;
        (0..chunks).into_par_iter().map(|c| chunk_sum(c, n, &f)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let partials: Vec<f64> = (0..chunks).map(|c| chunk_sum(c, n, &f)).collect();
    partials.iter().fold(0.0, |acc, p| acc + p)
}

/// Order-preserving map over independent work items.
pub(crate) fn map_collect<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}
