use std::collections::VecDeque;

use super::dtw::BandRadius;
use super::norm::NormalizedSeq;
use crate::scalar::Scalar;

/// Pointwise running max (`upper`) and min (`lower`) over a window of radius r.
///
/// Both vectors have the padded length of their source; padding entries are 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope<T> {
    pub upper: Vec<T>,
    pub lower: Vec<T>,
}

/// Reusable monotonic deques for [`envelope_with`].
#[derive(Debug, Default, Clone)]
pub struct EnvelopeScratch {
    max: VecDeque<usize>,
    min: VecDeque<usize>,
}

impl EnvelopeScratch {
    pub fn new() -> Self {
        Self::default()
    }
}

pub fn compute_envelope<T: Scalar>(q: &NormalizedSeq<T>, r: BandRadius) -> Envelope<T> {
    let mut upper = vec![T::zero(); q.padded_len()];
    let mut lower = vec![T::zero(); q.padded_len()];
    let n = q.len();
    envelope_with(q.values(), r.get(), &mut upper[..n], &mut lower[..n], &mut EnvelopeScratch::new());
    Envelope { upper, lower }
}

/// Sliding-window max/min of `values` with window `[i − r, i + r]` clipped to
/// the sequence, written to `upper[..n]` and `lower[..n]`. Linear time.
pub fn envelope_with<T: Scalar>(
    values: &[T],
    r: usize,
    upper: &mut [T],
    lower: &mut [T],
    scratch: &mut EnvelopeScratch,
) {
    let n = values.len();
    if n == 0 {
        return;
    }
    let r = r.min(n - 1);
    let (maxq, minq) = (&mut scratch.max, &mut scratch.min);
    maxq.clear();
    minq.clear();
    for j in 0..n + r {
        if j < n {
            let v = values[j];
            while maxq.back().is_some_and(|&b| values[b] <= v) {
                maxq.pop_back();
            }
            maxq.push_back(j);
            while minq.back().is_some_and(|&b| values[b] >= v) {
                minq.pop_back();
            }
            minq.push_back(j);
        }
        if j >= r {
            let i = j - r;
            let first = i.saturating_sub(r);
            while maxq.front().is_some_and(|&f| f < first) {
                maxq.pop_front();
            }
            while minq.front().is_some_and(|&f| f < first) {
                minq.pop_front();
            }
            upper[i] = values[maxq[0]];
            lower[i] = values[minq[0]];
        }
    }
}
