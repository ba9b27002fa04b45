use std::mem;

use super::norm::NormalizedSeq;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Sakoe-Chiba band radius: the warping path may stray at most `r` cells
/// from the diagonal. Any `r >= n - 1` is unconstrained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BandRadius(usize);

impl BandRadius {
    pub const fn new(r: usize) -> Self {
        Self(r)
    }

    pub const fn unconstrained() -> Self {
        Self(usize::MAX)
    }

    pub const fn get(self) -> usize {
        self.0
    }

    /// The radius actually in effect for sequences of length `n`.
    pub fn clipped(self, n: usize) -> usize {
        self.0.min(n.saturating_sub(1))
    }
}

impl From<usize> for BandRadius {
    fn from(r: usize) -> Self {
        Self(r)
    }
}

/// Two rolling band rows reused across DTW calls.
#[derive(Debug, Default, Clone)]
pub struct DtwScratch<T> {
    prev: Vec<T>,
    cur: Vec<T>,
}

impl<T: Scalar> DtwScratch<T> {
    pub fn new() -> Self {
        Self { prev: Vec::new(), cur: Vec::new() }
    }
}

/// Squared banded DTW between `q` and `c`.
///
/// Returns `Ok(None)` (pruned) only once some complete DP row lies entirely
/// above `threshold`, which proves the full distance exceeds it. A value
/// above the threshold may still be returned when no row triggers.
pub fn dtw_banded<T: Scalar>(
    q: &NormalizedSeq<T>,
    c: &NormalizedSeq<T>,
    r: BandRadius,
    threshold: T,
) -> Result<Option<T>> {
    if q.len() != c.len() {
        return Err(Error::LengthMismatch { expected: q.len(), actual: c.len() });
    }
    if q.is_empty() {
        return Err(Error::invalid("DTW of empty sequences"));
    }
    Ok(dtw_with(q.values(), c.values(), r.get(), threshold, &mut DtwScratch::new()))
}

/// Slice kernel behind [`dtw_banded`]; `q` and `c` must be non-empty and of
/// equal length.
#[allow(clippy::needless_range_loop)]
pub fn dtw_with<T: Scalar>(q: &[T], c: &[T], r: usize, threshold: T, scratch: &mut DtwScratch<T>) -> Option<T> {
    let n = q.len();
    debug_assert_eq!(n, c.len());
    let r = r.min(n - 1);
    let width = 2 * r + 1;
    let inf = T::infinity();
    let DtwScratch { prev, cur } = scratch;
    prev.clear();
    prev.resize(width, inf);
    cur.clear();
    cur.resize(width, inf);

    // Cell (i, j) lives at offset k = j + r - i of row i. From there
    // (i-1, j) is prev[k + 1], (i-1, j-1) is prev[k] and (i, j-1) is cur[k - 1].
    for i in 0..n {
        cur.fill(inf);
        let lo = i.saturating_sub(r);
        let hi = (i + r).min(n - 1);
        let qi = q[i];
        let mut row_min = inf;
        for j in lo..=hi {
            let k = j + r - i;
            let diff = qi - c[j];
            let step = if i == 0 && j == 0 {
                T::zero()
            } else {
                let mut m = prev[k];
                if k + 1 < width {
                    m = m.min(prev[k + 1]);
                }
                if k > 0 {
                    m = m.min(cur[k - 1]);
                }
                m
            };
            let d = diff * diff + step;
            cur[k] = d;
            row_min = row_min.min(d);
        }
        if row_min > threshold {
            return None;
        }
        mem::swap(prev, cur);
    }
    Some(prev[r])
}
