use rayon::prelude::*;

use super::bounds::SimilarityMap;
use super::matrix::SubsequenceMatrix;
use crate::scalar::Scalar;

/// Maps a 0-based matrix row to the 1-based start of its subsequence in the
/// full series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexArray {
    first: u64,
    rows: usize,
}

impl IndexArray {
    /// `first` is the global position of row 0, i.e. the fragment start.
    pub fn new(first: u64, rows: usize) -> Self {
        Self { first, rows }
    }

    pub fn global(&self, row: usize) -> u64 {
        debug_assert!(row < self.rows);
        self.first + row as u64
    }

    /// Inverse of [`Self::global`], `None` outside this fragment.
    pub fn local(&self, global: u64) -> Option<usize> {
        let row = global.checked_sub(self.first)? as usize;
        (row < self.rows).then_some(row)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.rows).map(|i| self.global(i))
    }
}

/// Per-lane scan positions. Lane `t` owns rows `[t·⌈N/p⌉, min((t+1)·⌈N/p⌉, N))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentCursors {
    bounds: Vec<(usize, usize)>,
    pos: Vec<usize>,
}

impl SegmentCursors {
    pub fn new(rows: usize, lanes: usize) -> Self {
        let lanes = lanes.max(1);
        let chunk = rows.div_ceil(lanes);
        let bounds: Vec<(usize, usize)> =
            (0..lanes).map(|t| ((t * chunk).min(rows), ((t + 1) * chunk).min(rows))).collect();
        let pos = bounds.iter().map(|b| b.0).collect();
        Self { bounds, pos }
    }

    pub fn lanes(&self) -> usize {
        self.bounds.len()
    }

    /// Half-open row range of lane `t`.
    pub fn segment(&self, t: usize) -> (usize, usize) {
        self.bounds[t]
    }

    /// Next unscanned row of lane `t`, equal to the segment end once exhausted.
    pub fn position(&self, t: usize) -> usize {
        self.pos[t]
    }

    pub fn remaining(&self) -> usize {
        self.bounds.iter().zip(&self.pos).map(|(b, &p)| b.1 - p).sum()
    }

    pub fn scanned(&self) -> usize {
        self.bounds.iter().zip(&self.pos).map(|(b, &p)| p - b.0).sum()
    }

    pub fn is_exhausted(&self) -> bool {
        self.remaining() == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    Pending,
    Done,
}

/// Rows copied out of the subsequence matrix for DTW evaluation.
///
/// Lane `t` writes into slots `[t·s, (t+1)·s)`; only the first
/// `lane_len(t)` of those are live after a fill.
#[derive(Debug, Clone)]
pub struct CandidateBatch<T> {
    row_width: usize,
    segment: usize,
    data: Vec<T>,
    index: Vec<u64>,
    status: Vec<RowStatus>,
    filled: Vec<usize>,
}

impl<T: Scalar> CandidateBatch<T> {
    pub fn new(lanes: usize, segment: usize, row_width: usize) -> Self {
        let slots = lanes * segment;
        Self {
            row_width,
            segment,
            data: vec![T::zero(); slots * row_width],
            index: vec![0; slots],
            status: vec![RowStatus::Done; slots],
            filled: vec![0; lanes],
        }
    }

    pub fn capacity(&self) -> usize {
        self.index.len()
    }

    pub fn len(&self) -> usize {
        self.filled.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn lane_len(&self, t: usize) -> usize {
        self.filled[t]
    }

    /// Slot ids holding live rows, lane by lane.
    pub fn slots(&self) -> Vec<usize> {
        self.filled.iter().enumerate().flat_map(|(t, &f)| t * self.segment..t * self.segment + f).collect()
    }

    pub fn row(&self, slot: usize) -> &[T] {
        &self.data[slot * self.row_width..(slot + 1) * self.row_width]
    }

    pub fn global_index(&self, slot: usize) -> u64 {
        self.index[slot]
    }

    pub fn status(&self, slot: usize) -> RowStatus {
        self.status[slot]
    }

    pub(crate) fn mark_done(&mut self) {
        self.status.fill(RowStatus::Done);
    }

    /// Live rows as (global index, padded row).
    pub fn iter(&self) -> impl Iterator<Item = (u64, &[T])> + '_ {
        self.slots().into_iter().map(move |slot| (self.index[slot], self.row(slot)))
    }
}

/// Advance every lane through its segment, storing `decide(row, map[row])`
/// back into the map and copying admitted rows into the batch, until the lane
/// holds `segment` rows or its segment is exhausted. Lanes run in parallel.
pub(crate) fn scan_segments<T, F>(
    batch: &mut CandidateBatch<T>,
    s: &SubsequenceMatrix<T>,
    cursors: &mut SegmentCursors,
    idx: &IndexArray,
    map: &mut [bool],
    decide: F,
) -> usize
where
    T: Scalar,
    F: Fn(usize, bool) -> bool + Sync,
{
    let (seg, rw) = (batch.segment, batch.row_width);
    debug_assert_eq!(rw, s.row_width());
    debug_assert_eq!(batch.filled.len(), cursors.lanes());

    let mut map_parts = Vec::with_capacity(cursors.lanes());
    let mut rest = map;
    for &(lo, hi) in &cursors.bounds {
        let (head, tail) = rest.split_at_mut(hi - lo);
        map_parts.push(head);
        rest = tail;
    }

    let lanes: Vec<_> = batch
        .data
        .chunks_mut(seg * rw)
        .zip(batch.index.chunks_mut(seg))
        .zip(batch.status.chunks_mut(seg))
        .zip(batch.filled.iter_mut())
        .zip(cursors.pos.iter_mut())
        .zip(cursors.bounds.iter())
        .zip(map_parts)
        .collect();

    lanes
        .into_par_iter()
        .map(|((((((data, index), status), filled), pos), &(lo, hi)), map)| {
            let start = *pos;
            let mut count = 0;
            while *pos < hi && count < seg {
                let row = *pos;
                *pos += 1;
                let keep = decide(row, map[row - lo]);
                map[row - lo] = keep;
                if keep {
                    data[count * rw..(count + 1) * rw].copy_from_slice(s.row(row));
                    index[count] = idx.global(row);
                    status[count] = RowStatus::Pending;
                    count += 1;
                }
            }
            *filled = count;
            *pos - start
        })
        .sum()
}

/// Fill a fresh batch from rows whose map entry is TRUE, `segment` rows per
/// lane at most. Returns an empty batch iff every cursor is exhausted.
pub fn fill_candidate_batch<T: Scalar>(
    s: &SubsequenceMatrix<T>,
    map: &SimilarityMap,
    cursors: &mut SegmentCursors,
    idx: &IndexArray,
    segment: usize,
) -> CandidateBatch<T> {
    let mut batch = CandidateBatch::new(cursors.lanes(), segment.max(1), s.row_width());
    let mut flags = map.0.clone();
    scan_segments(&mut batch, s, cursors, idx, &mut flags, |_, b| b);
    batch
}
