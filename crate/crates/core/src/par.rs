//! Execution helpers shared by the sequential and rayon code paths.
//!
//! Reductions are blocked into fixed-size chunks whose partial sums are
//! combined in chunk order, so the result is bit-identical whether the
//! chunks run on one thread or many. The `parallel` feature only changes
//! where the chunks execute, never the arithmetic.

/// Chunk length for blocked history sums.
pub(crate) const SUM_CHUNK: usize = 1024;

/// Minimum number of terms before a history sum is worth spreading over threads.
#[cfg(feature = "parallel")]
pub(crate) const PAR_MIN_TERMS: usize = 8192;

/// Minimum number of output nodes before the L1 evaluator fans out.
pub(crate) const L1_PAR_MIN_NODES: usize = 2048;

/// Accumulates `acc[c] += sum_{j in j0..=j1} w[k - j] * hist[j * dim + c]`.
///
/// `w` is indexed by lag `k - j`; callers guarantee `j1 <= k < w.len() + j0`.
/// The sum is chunk-blocked (see module docs) in ascending `j`.
pub(crate) fn weighted_history_sum(
    w: &[f64],
    hist: &[f64],
    dim: usize,
    j0: usize,
    j1: usize,
    k: usize,
    acc: &mut [f64],
) {
    debug_assert!(acc.len() == dim);
    if j1 < j0 {
        return;
    }
    #[cfg(feature = "parallel")]
    if j1 - j0 + 1 >= PAR_MIN_TERMS {
        use rayon::prelude::*;
        let n_chunks = (j1 - j0 + 1).div_ceil(SUM_CHUNK);
        let partials: Vec<Vec<f64>> = (0..n_chunks)
            .into_par_iter()
            .map(|c| {
                let lo = j0 + c * SUM_CHUNK;
                let hi = (lo + SUM_CHUNK - 1).min(j1);
                let mut part = vec![0.0; dim];
                block_sum(w, hist, dim, lo, hi, k, &mut part);
                part
            })
            .collect();
        for part in &partials {
            for c in 0..dim {
                acc[c] += part[c];
            }
        }
        return;
    }

    let mut part = vec![0.0; dim];
    let mut lo = j0;
    while lo <= j1 {
        let hi = (lo + SUM_CHUNK - 1).min(j1);
        for p in part.iter_mut() {
            *p = 0.0;
        }
        block_sum(w, hist, dim, lo, hi, k, &mut part);
        for c in 0..dim {
            acc[c] += part[c];
        }
        lo = hi + 1;
    }
}

#[inline]
fn block_sum(w: &[f64], hist: &[f64], dim: usize, lo: usize, hi: usize, k: usize, part: &mut [f64]) {
    for j in lo..=hi {
        let wj = w[k - j];
        let row = &hist[j * dim..(j + 1) * dim];
        for c in 0..dim {
            part[c] += wj * row[c];
        }
    }
}

/// Maps `f` over `0..n`, in parallel when the feature is enabled and the
/// problem is large enough; output order is always index order.
pub(crate) fn map_indexed<T, F>(n: usize, par_threshold: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if n >= par_threshold {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = par_threshold;
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocked_sum_matches_direct_sum() {
        let k = 3000;
        let w: Vec<f64> = (0..=k).map(|m| 1.0 / (m as f64 + 1.0)).collect();
        let dim = 3;
        let hist: Vec<f64> = (0..(k + 1) * dim).map(|i| (i as f64).sin()).collect();

        let mut acc = vec![0.0; dim];
        weighted_history_sum(&w, &hist, dim, 0, k, k, &mut acc);

        let mut direct = vec![0.0; dim];
        for j in 0..=k {
            for c in 0..dim {
                direct[c] += w[k - j] * hist[j * dim + c];
            }
        }
        for c in 0..dim {
            assert!((acc[c] - direct[c]).abs() <= 1e-12 * direct[c].abs().max(1.0));
        }
    }

    #[test]
    fn map_indexed_preserves_order() {
        let out = map_indexed(5000, 16, |i| i * 2);
        assert_eq!(out.len(), 5000);
        for (i, v) in out.iter().enumerate() {
            assert_eq!(*v, i * 2);
        }
    }
}
