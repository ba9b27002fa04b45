//! Matrix-shaped working set for one fragment.
//!
//! Every subsequence of the fragment becomes a z-normalized row of a padded
//! matrix whose width is a multiple of the vector width `w`. All three lower
//! bounds are precomputed per row once; each search round then only compares
//! those bounds against the current threshold (the similarity map) and copies
//! surviving rows into a contiguous candidate batch for DTW evaluation.

mod batch;
mod bounds;
mod matrix;

pub(crate) use batch::scan_segments;
pub use batch::{fill_candidate_batch, CandidateBatch, IndexArray, RowStatus, SegmentCursors};
pub use bounds::{
    admits, admits_ranked, build_lb_matrix, build_lb_matrix_fused, refresh_similarity_map, CascadeOrder, LowerBound,
    LowerBoundMatrix, SimilarityMap,
};
pub use matrix::{build_row_envelopes, build_subsequence_matrix, RowEnvelopes, SubsequenceMatrix};

use std::mem::size_of;

/// Bytes held by one fragment's working set: the subsequence matrix, the
/// lower-bound matrix, the similarity map and a full candidate batch.
pub fn footprint_bytes<T>(rows: usize, row_width: usize, lanes: usize, segment: usize, width: usize) -> u64 {
    let elem = size_of::<T>() as u64;
    let (rows, row_width) = (rows as u64, row_width as u64);
    let batch_rows = (lanes as u64) * (segment as u64);
    (rows * row_width + width as u64) * elem
        + rows * bounds::LB_COUNT as u64 * elem
        + rows
        + batch_rows * (row_width * elem + 8 + 1)
}
