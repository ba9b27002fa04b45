use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// A candidate answer: squared DTW distance and 1-based global start index.
///
/// Ordered lexicographically, smaller distance first and then smaller index,
/// so every route through the search agrees on a single winner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchResult<T> {
    pub distance: T,
    pub index: u64,
}

impl<T: Scalar> MatchResult<T> {
    pub fn new(distance: T, index: u64) -> Self {
        Self { distance, index }
    }

    /// Placeholder that every real candidate beats.
    pub fn unset() -> Self {
        Self { distance: T::infinity(), index: u64::MAX }
    }

    pub fn is_set(&self) -> bool {
        self.index != u64::MAX
    }

    /// Strictly better under (distance, index) order.
    pub fn beats(&self, other: &Self) -> bool {
        self.distance < other.distance || (self.distance == other.distance && self.index < other.index)
    }

    pub fn min(self, other: Self) -> Self {
        if other.beats(&self) {
            other
        } else {
            self
        }
    }

    pub fn to_f64(self) -> MatchResult<f64> {
        MatchResult { distance: self.distance.as_f64(), index: self.index }
    }

    pub fn from_f64(pair: MatchResult<f64>) -> Self {
        Self { distance: T::from_f64_exact(pair.distance), index: pair.index }
    }
}
