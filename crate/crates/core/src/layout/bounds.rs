use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::matrix::{RowEnvelopes, SubsequenceMatrix};
use crate::error::{Error, Result};
use crate::math::raw::{envelope_with, keogh, kim_fl};
use crate::math::EnvelopeScratch;
use crate::query::QueryProfile;
use crate::result::MatchResult;
use crate::scalar::Scalar;

pub(crate) const LB_COUNT: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LowerBound {
    /// First and last point pairs.
    KimFl,
    /// Candidate against the query envelope.
    KeoghEc,
    /// Query against the candidate envelope.
    KeoghEq,
}

impl LowerBound {
    pub fn name(self) -> &'static str {
        match self {
            LowerBound::KimFl => "kim",
            LowerBound::KeoghEc => "ec",
            LowerBound::KeoghEq => "eq",
        }
    }
}

/// Order in which the bounds are stored and tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CascadeOrder([LowerBound; LB_COUNT]);

impl CascadeOrder {
    pub fn new(order: [LowerBound; LB_COUNT]) -> Result<Self> {
        let all = [LowerBound::KimFl, LowerBound::KeoghEc, LowerBound::KeoghEq];
        if all.iter().all(|b| order.contains(b)) {
            Ok(Self(order))
        } else {
            Err(Error::invalid("cascade order must be a permutation of kim, ec, eq"))
        }
    }

    pub fn bounds(&self) -> [LowerBound; LB_COUNT] {
        self.0
    }

    pub fn position(&self, bound: LowerBound) -> usize {
        self.0.iter().position(|&b| b == bound).expect("permutation")
    }
}

impl Default for CascadeOrder {
    fn default() -> Self {
        Self([LowerBound::KimFl, LowerBound::KeoghEc, LowerBound::KeoghEq])
    }
}

impl fmt::Display for CascadeOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.0[0].name(), self.0[1].name(), self.0[2].name())
    }
}

impl FromStr for CascadeOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<LowerBound> = s
            .split(',')
            .map(|p| match p.trim().to_ascii_lowercase().as_str() {
                "kim" | "kimfl" => Ok(LowerBound::KimFl),
                "ec" | "keoghec" => Ok(LowerBound::KeoghEc),
                "eq" | "keogheq" => Ok(LowerBound::KeoghEq),
                other => Err(Error::invalid(format!("unknown lower bound `{other}`"))),
            })
            .collect::<Result<_>>()?;
        let arr: [LowerBound; LB_COUNT] =
            parts.try_into().map_err(|_| Error::invalid("cascade order needs exactly three bounds"))?;
        Self::new(arr)
    }
}

/// `rows x 3` lower bounds of every row against the query, columns in cascade order.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerBoundMatrix<T> {
    data: Vec<T>,
    order: CascadeOrder,
}

impl<T: Scalar> LowerBoundMatrix<T> {
    pub fn rows(&self) -> usize {
        self.data.len() / LB_COUNT
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * LB_COUNT..(i + 1) * LB_COUNT]
    }

    pub fn order(&self) -> CascadeOrder {
        self.order
    }

    /// Value of a specific bound for row `i`, regardless of column order.
    pub fn get(&self, i: usize, bound: LowerBound) -> T {
        self.row(i)[self.order.position(bound)]
    }

    /// Overwrite a row's bounds. Only meant for fault-injection harnesses.
    #[doc(hidden)]
    pub fn corrupt_row(&mut self, i: usize, value: T) {
        self.data[i * LB_COUNT..(i + 1) * LB_COUNT].fill(value);
    }
}

fn check_shape<T: Scalar>(s: &SubsequenceMatrix<T>, q: &QueryProfile<T>) -> Result<()> {
    if s.n() != q.len() {
        return Err(Error::LengthMismatch { expected: q.len(), actual: s.n() });
    }
    if s.row_width() != q.row_width() {
        return Err(Error::LengthMismatch { expected: q.row_width(), actual: s.row_width() });
    }
    Ok(())
}

fn fill_row<T: Scalar>(
    out: &mut [T],
    order: CascadeOrder,
    row: &[T],
    n: usize,
    q: &QueryProfile<T>,
    cu: &[T],
    cl: &[T],
) {
    for (slot, bound) in out.iter_mut().zip(order.bounds()) {
        *slot = match bound {
            LowerBound::KimFl => kim_fl(q.seq().values(), &row[..n]),
            LowerBound::KeoghEc => keogh(row, &q.envelope().upper, &q.envelope().lower),
            LowerBound::KeoghEq => keogh(q.seq().padded(), cu, cl),
        };
    }
}

/// Bounds of every row of `s` against `q`, using precomputed row envelopes.
pub fn build_lb_matrix<T: Scalar>(
    s: &SubsequenceMatrix<T>,
    envs: &RowEnvelopes<T>,
    q: &QueryProfile<T>,
    order: CascadeOrder,
) -> Result<LowerBoundMatrix<T>> {
    check_shape(s, q)?;
    if envs.radius() != q.radius() {
        return Err(Error::invalid("row envelopes and query use different band radii"));
    }
    let mut data = vec![T::zero(); s.rows() * LB_COUNT];
    data.par_chunks_mut(LB_COUNT).enumerate().for_each(|(i, out)| {
        fill_row(out, order, s.row(i), s.n(), q, envs.upper(i), envs.lower(i));
    });
    Ok(LowerBoundMatrix { data, order })
}

/// Same values as [`build_lb_matrix`], but each row envelope is built on the
/// fly and dropped, so the envelope table is never materialized.
pub fn build_lb_matrix_fused<T: Scalar>(
    s: &SubsequenceMatrix<T>,
    q: &QueryProfile<T>,
    order: CascadeOrder,
) -> Result<LowerBoundMatrix<T>> {
    check_shape(s, q)?;
    let (n, rw, r) = (s.n(), s.row_width(), q.radius().get());
    let mut data = vec![T::zero(); s.rows() * LB_COUNT];
    data.par_chunks_mut(LB_COUNT).enumerate().for_each_init(
        || (EnvelopeScratch::new(), vec![T::zero(); rw], vec![T::zero(); rw]),
        |(scratch, cu, cl), (i, out)| {
            let row = s.row(i);
            envelope_with(&row[..n], r, &mut cu[..n], &mut cl[..n], scratch);
            fill_row(out, order, row, n, q, cu, cl);
        },
    );
    Ok(LowerBoundMatrix { data, order })
}

/// Per-row flag: TRUE iff the row may still beat the threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimilarityMap(pub(crate) Vec<bool>);

impl SimilarityMap {
    pub fn new(flags: Vec<bool>) -> Self {
        Self(flags)
    }

    pub fn all(rows: usize, value: bool) -> Self {
        Self(vec![value; rows])
    }

    pub fn flags(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count_true(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }
}

/// Conjunction of `lb < bsf` over a row of bounds, tested in column order.
#[inline]
pub fn admits<T: Scalar>(bounds: &[T], bsf: T) -> bool {
    bounds.iter().all(|&lb| lb < bsf)
}

/// [`admits`] with the (distance, index) tie rule folded in: a row whose bound
/// equals the threshold survives when its index is below the champion's, and
/// the champion row itself never survives (its distance is already known).
#[inline]
pub fn admits_ranked<T: Scalar>(bounds: &[T], index: u64, champion: &MatchResult<T>) -> bool {
    index != champion.index
        && bounds.iter().all(|&lb| lb < champion.distance || (lb == champion.distance && index < champion.index))
}

pub fn refresh_similarity_map<T: Scalar>(l: &LowerBoundMatrix<T>, bsf: T) -> SimilarityMap {
    SimilarityMap(l.data.par_chunks(LB_COUNT).map(|row| admits(row, bsf)).collect())
}
