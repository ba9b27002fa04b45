//! Per-sequence kernels: normalization, envelopes, lower bounds and banded DTW.
//!
//! The typed entry points ([`znormalize`], [`lb_keogh_ec`], [`dtw_banded`], ...)
//! validate shapes and return [`Result`](crate::Result). The [`raw`] module holds
//! the unchecked slice kernels the matrix layout and baseline scans call in
//! their inner loops.

mod bounds;
mod dtw;
mod envelope;
mod norm;

pub use bounds::{lb_keogh_ec, lb_keogh_eq, lb_kim_fl, squared_euclid};
pub use dtw::{dtw_banded, BandRadius, DtwScratch};
pub use envelope::{compute_envelope, Envelope, EnvelopeScratch};
pub use norm::{padding_for, znormalize, NormalizedSeq};

/// Slice-level kernels without shape checks.
pub mod raw {
    pub use super::bounds::{keogh, kim_fl, sq_euclid};
    pub use super::dtw::dtw_with;
    pub use super::envelope::envelope_with;
    pub use super::norm::znormalize_into;
}
