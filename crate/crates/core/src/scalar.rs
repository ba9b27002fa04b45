//! Floating-point element types the search can run over.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumCast, ToPrimitive};

/// Real sample type: `f32` or `f64`.
///
/// Every kernel in this crate is written against this trait. Conversions to
/// and from `f64` are used only at the boundaries (shared thresholds, wire
/// payloads, reports) where an `f32` value widens exactly.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumCast + Sum + Default + Debug + Display + Send + Sync + 'static
{
    /// Normalization guard used when the caller does not choose one.
    const DEFAULT_EPSILON: f64;

    fn from_f64_exact(v: f64) -> Self {
        <Self as NumCast>::from(v).unwrap_or_else(Self::nan)
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {
    const DEFAULT_EPSILON: f64 = 1e-6;
}

impl Scalar for f64 {
    const DEFAULT_EPSILON: f64 = 1e-12;
}
