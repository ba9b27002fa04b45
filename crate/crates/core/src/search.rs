//! Single-fragment search: build the matrix working set once, seed the
//! threshold from a random row, then repeat improve rounds (map refresh,
//! batch fill, parallel DTW) until every row has been scanned.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;
use rayon::ThreadPool;

use crate::error::{Error, Result};
use crate::layout::{
    admits_ranked, build_lb_matrix_fused, build_subsequence_matrix, footprint_bytes, scan_segments, CandidateBatch,
    CascadeOrder, IndexArray, LowerBoundMatrix, SegmentCursors, SimilarityMap, SubsequenceMatrix,
};
use crate::math::raw::dtw_with;
use crate::math::{BandRadius, DtwScratch};
use crate::query::QueryProfile;
use crate::result::MatchResult;
use crate::rng;
use crate::scalar::Scalar;

/// Default per-lane batch depth.
pub const DEFAULT_SEGMENT: usize = 100;
/// Default vector width: eight 64-bit lanes.
pub const DEFAULT_WIDTH: usize = 8;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchParams {
    pub radius: BandRadius,
    /// Vector width `w`; rows are padded to a multiple of it.
    pub width: usize,
    /// Execution lanes `p`.
    pub lanes: usize,
    /// Rows each lane copies into a batch per round (`s`).
    pub segment: usize,
    pub seed: u64,
    pub epsilon: f64,
    pub early_abandon: bool,
    pub cascade: CascadeOrder,
    /// Upper bound on one fragment's working set, in bytes.
    pub memory_budget: Option<u64>,
}

impl SearchParams {
    pub fn new(radius: BandRadius) -> Self {
        Self {
            radius,
            width: DEFAULT_WIDTH,
            lanes: 1,
            segment: DEFAULT_SEGMENT,
            seed: DEFAULT_SEED,
            epsilon: 1e-12,
            early_abandon: true,
            cascade: CascadeOrder::default(),
            memory_budget: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.lanes == 0 {
            return Err(Error::invalid("thread count must be at least 1"));
        }
        if self.segment == 0 {
            return Err(Error::invalid("segment size must be at least 1"));
        }
        if self.width == 0 {
            return Err(Error::invalid("vector width must be at least 1"));
        }
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return Err(Error::invalid("normalization epsilon must be positive"));
        }
        Ok(())
    }
}

/// A slice of the full series together with the global (1-based) position of
/// its first sample.
#[derive(Debug, Clone, Copy)]
pub struct Fragment<'a, T> {
    pub start: u64,
    pub values: &'a [T],
}

impl<'a, T> Fragment<'a, T> {
    pub fn whole(values: &'a [T]) -> Self {
        Self { start: 1, values }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundReport<T> {
    pub evaluated: usize,
    pub bsf: T,
    /// The batch came back empty: nothing left to scan.
    pub done: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchStats {
    pub rows: u64,
    /// DTW evaluations on batch rows (the seeding evaluation excluded).
    pub dtw_evals: u64,
    pub rounds: u64,
    /// Rows rejected by the similarity map.
    pub map_rejections: u64,
}

impl SearchStats {
    /// Fraction of rows that never reached DTW.
    pub fn pruning_ratio(&self) -> f64 {
        if self.rows == 0 {
            0.0
        } else {
            1.0 - self.dtw_evals as f64 / self.rows as f64
        }
    }

    pub fn merge(&mut self, other: &SearchStats) {
        self.rows += other.rows;
        self.dtw_evals += other.dtw_evals;
        self.rounds = self.rounds.max(other.rounds);
        self.map_rejections += other.map_rejections;
    }
}

pub struct NodeState<T> {
    fragment_start: u64,
    fragment_len: usize,
    params: SearchParams,
    query: QueryProfile<T>,
    matrix: SubsequenceMatrix<T>,
    bounds: LowerBoundMatrix<T>,
    map: SimilarityMap,
    cursors: SegmentCursors,
    index: IndexArray,
    batch: CandidateBatch<T>,
    best: MatchResult<T>,
    seed_row: u64,
    remaining: usize,
    stats: SearchStats,
    prepare_time: Duration,
    pool: ThreadPool,
}

impl<T: Scalar> NodeState<T> {
    /// Build all per-fragment structures and seed the threshold with the DTW
    /// distance of one randomly chosen row, drawn from `stream` of the seed.
    pub fn prepare(fragment: Fragment<'_, T>, query: &[T], params: &SearchParams, stream: u64) -> Result<Self> {
        params.validate()?;
        let n = query.len();
        if n == 0 {
            return Err(Error::invalid("query is empty"));
        }
        if fragment.values.len() < n {
            return Err(Error::SeriesTooShort { len: fragment.values.len(), n });
        }
        let started = Instant::now();
        let rows = fragment.values.len() - n + 1;
        let lanes = params.lanes;
        let segment = params.segment.min(rows.div_ceil(lanes)).max(1);
        let row_width = n + crate::math::padding_for(n, params.width);
        let required = footprint_bytes::<T>(rows, row_width, lanes, segment, params.width);
        if let Some(budget) = params.memory_budget {
            if required > budget {
                return Err(Error::MemoryBudget { required, budget });
            }
        }

        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(lanes)
            .build()
            .map_err(|e| Error::invalid(format!("cannot start {lanes} worker threads: {e}")))?;
        let epsilon = T::from_f64_exact(params.epsilon);
        let query = QueryProfile::new(query, params.radius, params.width, epsilon)?;
        let (matrix, bounds) = pool.install(|| -> Result<_> {
            let matrix = build_subsequence_matrix(fragment.values, n, params.width, epsilon)?;
            let bounds = build_lb_matrix_fused(&matrix, &query, params.cascade)?;
            Ok((matrix, bounds))
        })?;

        let index = IndexArray::new(fragment.start, rows);
        let seed_row = rng::generator(params.seed, stream).gen_range(0..rows);
        let seeded = dtw_with(
            query.seq().values(),
            matrix.row_values(seed_row),
            params.radius.get(),
            T::infinity(),
            &mut DtwScratch::new(),
        )
        .expect("unbounded DTW is never pruned");

        Ok(Self {
            fragment_start: fragment.start,
            fragment_len: fragment.values.len(),
            params: SearchParams { segment, ..params.clone() },
            query,
            bounds,
            map: SimilarityMap::all(rows, true),
            cursors: SegmentCursors::new(rows, lanes),
            index,
            batch: CandidateBatch::new(lanes, segment, row_width),
            best: MatchResult::new(seeded, index.global(seed_row)),
            seed_row: index.global(seed_row),
            remaining: rows,
            stats: SearchStats { rows: rows as u64, ..SearchStats::default() },
            prepare_time: started.elapsed(),
            matrix,
            pool,
        })
    }

    /// One round: refresh the map against the current champion for the rows
    /// each lane scans, fill a batch, evaluate it, lower the threshold.
    pub fn improve_round(&mut self) -> RoundReport<T> {
        let champion = self.best;
        let bounds = &self.bounds;
        let index = self.index;
        let scanned = self.pool.install(|| {
            scan_segments(&mut self.batch, &self.matrix, &mut self.cursors, &index, &mut self.map.0, |row, _| {
                admits_ranked(bounds.row(row), index.global(row), &champion)
            })
        });
        self.remaining -= scanned;
        let evaluated = self.batch.len();
        self.stats.map_rejections += (scanned - evaluated) as u64;
        if evaluated == 0 {
            return RoundReport { evaluated: 0, bsf: self.best.distance, done: true };
        }

        let slots = self.batch.slots();
        let chunk = slots.len().div_ceil(self.params.lanes);
        let threshold = AtomicU64::new(champion.distance.as_f64().to_bits());
        let (batch, query) = (&self.batch, &self.query);
        let (r, early, n) = (self.params.radius.get(), self.params.early_abandon, query.len());
        let round_best = self.pool.install(|| {
            slots
                .par_chunks(chunk)
                .map(|lane| {
                    let mut scratch = DtwScratch::new();
                    let mut best = MatchResult::unset();
                    for &slot in lane {
                        let limit = if early {
                            T::from_f64_exact(f64::from_bits(threshold.load(Ordering::Relaxed)))
                        } else {
                            T::infinity()
                        };
                        let Some(d) = dtw_with(query.seq().values(), &batch.row(slot)[..n], r, limit, &mut scratch)
                        else {
                            continue;
                        };
                        let cand = MatchResult::new(d, batch.global_index(slot));
                        if cand.beats(&best) {
                            best = cand;
                        }
                        // distances are non-negative, so bit order is numeric order
                        threshold.fetch_min(d.as_f64().to_bits(), Ordering::Relaxed);
                    }
                    best
                })
                .reduce(MatchResult::unset, MatchResult::min)
        });
        self.batch.mark_done();
        self.best = self.best.min(round_best);
        self.stats.dtw_evals += evaluated as u64;
        self.stats.rounds += 1;
        RoundReport { evaluated, bsf: self.best.distance, done: false }
    }

    /// Run rounds until the fragment is exhausted.
    pub fn run_to_completion(&mut self) -> MatchResult<T> {
        while !self.improve_round().done {}
        self.best
    }

    /// Take a (possibly remote) champion if it beats the local one.
    pub fn adopt(&mut self, other: MatchResult<T>) {
        self.best = self.best.min(other);
    }

    pub fn best(&self) -> MatchResult<T> {
        self.best
    }

    /// Rows not yet scanned; zero once the fragment is done.
    pub fn remaining(&self) -> usize {
        self.remaining
    }

    pub fn is_exhausted(&self) -> bool {
        self.remaining == 0
    }

    pub fn stats(&self) -> SearchStats {
        self.stats
    }

    pub fn prepare_time(&self) -> Duration {
        self.prepare_time
    }

    pub fn params(&self) -> &SearchParams {
        &self.params
    }

    pub fn query(&self) -> &QueryProfile<T> {
        &self.query
    }

    pub fn matrix(&self) -> &SubsequenceMatrix<T> {
        &self.matrix
    }

    pub fn bounds(&self) -> &LowerBoundMatrix<T> {
        &self.bounds
    }

    pub fn similarity_map(&self) -> &SimilarityMap {
        &self.map
    }

    pub fn cursors(&self) -> &SegmentCursors {
        &self.cursors
    }

    pub fn index(&self) -> &IndexArray {
        &self.index
    }

    /// Global index of the row that seeded the threshold.
    pub fn seed_index(&self) -> u64 {
        self.seed_row
    }

    /// (global start, sample count) of the fragment.
    pub fn fragment(&self) -> (u64, usize) {
        (self.fragment_start, self.fragment_len)
    }

    /// Make one row unreachable by overwriting its bounds with +inf, and drop
    /// the champion if it is that row. Test harness only.
    #[doc(hidden)]
    pub fn corrupt_lower_bound(&mut self, global: u64) {
        if let Some(row) = self.index.local(global) {
            self.bounds.corrupt_row(row, T::infinity());
            if self.best.index == global {
                self.best = MatchResult::unset();
            }
        }
    }
}

/// Best match of `query` within a single series or fragment.
pub fn local_best_match<T: Scalar>(
    fragment: Fragment<'_, T>,
    query: &[T],
    params: &SearchParams,
) -> Result<(MatchResult<T>, SearchStats)> {
    let mut state = NodeState::prepare(fragment, query, params, rng::worker_stream(0))?;
    let best = state.run_to_completion();
    Ok((best, state.stats()))
}
