//! Best-match subsequence search under banded (Sakoe-Chiba) DTW.
//!
//! Given a long series `T` and a query `Q` of length `n`, find the start of
//! the length-`n` subsequence whose z-normalized squared DTW distance to the
//! normalized query is smallest (ties go to the smaller start).
//!
//! The search runs at two levels:
//!
//! * [`comms::run_distributed`] splits the series into overlapping fragments,
//!   one per worker, and keeps the workers' best-so-far thresholds in sync
//!   through per-round min and and reductions.
//! * Inside a worker, [`search::NodeState`] lays every subsequence out as a
//!   padded matrix row, precomputes three lower bounds per row, and evaluates
//!   DTW over batches of surviving rows on `p` lanes.
//!
//! [`baseline`] holds the sequential cascade scan and a brute-force scan used
//! as oracles. All distances are squared; no square roots are taken.
//!
//! Kernels are generic over [`Scalar`] (`f32` or `f64`); the aliases below
//! name the common instantiations.

pub mod baseline;
pub mod comms;
pub mod error;
pub mod fragment;
pub mod io;
pub mod layout;
pub mod math;
pub mod query;
pub mod result;
pub mod rng;
pub mod scalar;
pub mod search;
pub mod series;

pub use baseline::{brute_force_search, ucr_dtw_search, ScanStats};
pub use comms::{run_distributed, ClusterConfig, Transport};
pub use error::{Error, Result};
pub use fragment::{partition_overlap, FragmentPlan};
pub use math::BandRadius;
pub use query::QueryProfile;
pub use result::MatchResult;
pub use scalar::Scalar;
pub use search::{local_best_match, Fragment, NodeState, SearchParams, SearchStats};
pub use series::TimeSeries;

pub type Series = TimeSeries<f64>;
pub type Series32 = TimeSeries<f32>;
pub type Match = MatchResult<f64>;
pub type Match32 = MatchResult<f32>;
pub type Node = NodeState<f64>;
pub type Node32 = NodeState<f32>;
pub type Query = QueryProfile<f64>;
pub type Query32 = QueryProfile<f32>;
