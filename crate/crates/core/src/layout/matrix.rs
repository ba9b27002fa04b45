use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::math::raw::{envelope_with, znormalize_into};
use crate::math::{padding_for, BandRadius, EnvelopeScratch};
use crate::scalar::Scalar;

/// Zero-initialized storage whose first element sits on a `w`-element boundary.
#[derive(Debug, Clone)]
pub(crate) struct AlignedRows<T> {
    storage: Vec<T>,
    offset: usize,
    len: usize,
}

impl<T: Scalar> AlignedRows<T> {
    pub(crate) fn zeroed(len: usize, width: usize) -> Self {
        let elem = std::mem::size_of::<T>();
        let storage = vec![T::zero(); len + width];
        let bytes = width * elem;
        let offset = if bytes.is_power_of_two() {
            let addr = storage.as_ptr() as usize;
            ((bytes - addr % bytes) % bytes) / elem
        } else {
            0
        };
        Self { storage, offset, len }
    }

    pub(crate) fn as_slice(&self) -> &[T] {
        &self.storage[self.offset..self.offset + self.len]
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.storage[self.offset..self.offset + self.len]
    }
}

impl<T: PartialEq> PartialEq for AlignedRows<T> {
    fn eq(&self, other: &Self) -> bool {
        self.storage[self.offset..self.offset + self.len] == other.storage[other.offset..other.offset + other.len]
    }
}

/// One z-normalized, zero-padded row per subsequence of a fragment.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsequenceMatrix<T> {
    data: AlignedRows<T>,
    rows: usize,
    n: usize,
    row_width: usize,
    width: usize,
}

impl<T: Scalar> SubsequenceMatrix<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Logical subsequence length.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Padded row length, a multiple of [`Self::width`].
    pub fn row_width(&self) -> usize {
        self.row_width
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Padded row `i` (0-based).
    pub fn row(&self, i: usize) -> &[T] {
        &self.data.as_slice()[i * self.row_width..(i + 1) * self.row_width]
    }

    /// Row `i` without its padding.
    pub fn row_values(&self, i: usize) -> &[T] {
        &self.row(i)[..self.n]
    }

    pub fn as_slice(&self) -> &[T] {
        self.data.as_slice()
    }
}

/// Lay out every length-`n` subsequence of `fragment` as a normalized row.
pub fn build_subsequence_matrix<T: Scalar>(
    fragment: &[T],
    n: usize,
    width: usize,
    epsilon: T,
) -> Result<SubsequenceMatrix<T>> {
    if n == 0 {
        return Err(Error::invalid("subsequence length must be at least 1"));
    }
    if width == 0 {
        return Err(Error::invalid("vector width must be at least 1"));
    }
    if fragment.len() < n {
        return Err(Error::SeriesTooShort { len: fragment.len(), n });
    }
    let rows = fragment.len() - n + 1;
    let row_width = n + padding_for(n, width);
    let mut data = AlignedRows::zeroed(rows * row_width, width);
    data.as_mut_slice()
        .par_chunks_mut(row_width)
        .enumerate()
        .for_each(|(i, row)| znormalize_into(&fragment[i..i + n], epsilon, row));
    Ok(SubsequenceMatrix { data, rows, n, row_width, width })
}

/// Per-row envelopes of a [`SubsequenceMatrix`], same shape as the matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RowEnvelopes<T> {
    upper: AlignedRows<T>,
    lower: AlignedRows<T>,
    row_width: usize,
    radius: BandRadius,
}

impl<T: Scalar> RowEnvelopes<T> {
    pub fn upper(&self, i: usize) -> &[T] {
        &self.upper.as_slice()[i * self.row_width..(i + 1) * self.row_width]
    }

    pub fn lower(&self, i: usize) -> &[T] {
        &self.lower.as_slice()[i * self.row_width..(i + 1) * self.row_width]
    }

    pub fn radius(&self) -> BandRadius {
        self.radius
    }
}

pub fn build_row_envelopes<T: Scalar>(s: &SubsequenceMatrix<T>, r: BandRadius) -> RowEnvelopes<T> {
    let len = s.rows * s.row_width;
    let mut upper = AlignedRows::zeroed(len, s.width);
    let mut lower = AlignedRows::zeroed(len, s.width);
    let n = s.n;
    upper
        .as_mut_slice()
        .par_chunks_mut(s.row_width)
        .zip(lower.as_mut_slice().par_chunks_mut(s.row_width))
        .enumerate()
        .for_each_init(EnvelopeScratch::new, |scratch, (i, (u, l))| {
            envelope_with(s.row_values(i), r.get(), &mut u[..n], &mut l[..n], scratch);
        });
    RowEnvelopes { upper, lower, row_width: s.row_width, radius: r }
}
