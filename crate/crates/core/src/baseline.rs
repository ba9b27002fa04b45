//! Sequential reference scans. Both are single-threaded on purpose: they are
//! the oracles and the speedup baseline.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::layout::{CascadeOrder, LowerBound};
use crate::math::raw::{dtw_with, envelope_with, keogh, kim_fl, znormalize_into};
use crate::math::{padding_for, BandRadius, DtwScratch, EnvelopeScratch};
use crate::query::QueryProfile;
use crate::result::MatchResult;
use crate::scalar::Scalar;
use crate::search::SearchParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ScanStats {
    /// Subsequences rejected by each cascade stage, in cascade order.
    pub rejected: [u64; 3],
    /// How often each stage was evaluated at all.
    pub computed: [u64; 3],
    pub dtw_evals: u64,
    pub wall: Duration,
}

impl ScanStats {
    pub fn total(&self) -> u64 {
        self.rejected.iter().sum::<u64>() + self.dtw_evals
    }

    pub fn pruning_ratio(&self) -> f64 {
        let total = self.total();
        if total == 0 {
            0.0
        } else {
            1.0 - self.dtw_evals as f64 / total as f64
        }
    }
}

fn check(series: &[impl Scalar], n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("query is empty"));
    }
    if series.len() < n {
        return Err(Error::SeriesTooShort { len: series.len(), n });
    }
    Ok(())
}

/// Left-to-right cascade scan starting from an infinite threshold.
///
/// Each bound is computed only when the previous one did not reject; the
/// candidate envelope for the query-side bound is built on the fly.
pub fn ucr_dtw_search<T: Scalar>(
    series: &[T],
    query: &[T],
    params: &SearchParams,
) -> Result<(MatchResult<T>, ScanStats)> {
    params.validate()?;
    let n = query.len();
    check(series, n)?;
    let started = Instant::now();
    let epsilon = T::from_f64_exact(params.epsilon);
    let r = params.radius.get();
    let q = QueryProfile::new(query, params.radius, params.width, epsilon)?;
    let width = n + padding_for(n, params.width);
    let (qv, qp) = (q.seq().values(), q.seq().padded());
    let (qu, ql) = (&q.envelope().upper, &q.envelope().lower);

    let mut cand = vec![T::zero(); width];
    let mut cu = vec![T::zero(); width];
    let mut cl = vec![T::zero(); width];
    let mut env_scratch = EnvelopeScratch::new();
    let mut dtw_scratch = DtwScratch::new();
    let mut stats = ScanStats::default();
    let mut best = MatchResult::unset();
    let order: CascadeOrder = params.cascade;

    'rows: for start in 0..=series.len() - n {
        znormalize_into(&series[start..start + n], epsilon, &mut cand);
        for (stage, bound) in order.bounds().into_iter().enumerate() {
            stats.computed[stage] += 1;
            let lb = match bound {
                LowerBound::KimFl => kim_fl(qv, &cand[..n]),
                LowerBound::KeoghEc => keogh(&cand, qu, ql),
                LowerBound::KeoghEq => {
                    envelope_with(&cand[..n], r, &mut cu[..n], &mut cl[..n], &mut env_scratch);
                    keogh(qp, &cu, &cl)
                }
            };
            if lb > best.distance {
                stats.rejected[stage] += 1;
                continue 'rows;
            }
        }
        stats.dtw_evals += 1;
        let limit = if params.early_abandon { best.distance } else { T::infinity() };
        if let Some(d) = dtw_with(qv, &cand[..n], r, limit, &mut dtw_scratch) {
            let found = MatchResult::new(d, start as u64 + 1);
            if found.beats(&best) {
                best = found;
            }
        }
    }
    stats.wall = started.elapsed();
    Ok((best, stats))
}

/// Exact banded DTW against every subsequence, no pruning of any kind.
pub fn brute_force_search<T: Scalar>(series: &[T], query: &[T], r: BandRadius, epsilon: T) -> Result<MatchResult<T>> {
    let n = query.len();
    check(series, n)?;
    let q = QueryProfile::new(query, r, 1, epsilon)?;
    let mut cand = vec![T::zero(); n];
    let mut scratch = DtwScratch::new();
    let mut best = MatchResult::unset();
    for start in 0..=series.len() - n {
        znormalize_into(&series[start..start + n], epsilon, &mut cand);
        let d = dtw_with(q.seq().values(), &cand, r.get(), T::infinity(), &mut scratch)
            .expect("unbounded DTW is never pruned");
        let found = MatchResult::new(d, start as u64 + 1);
        if found.beats(&best) {
            best = found;
        }
    }
    Ok(best)
}
