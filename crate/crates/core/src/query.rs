use crate::error::{Error, Result};
use crate::math::{compute_envelope, znormalize, BandRadius, Envelope, NormalizedSeq};
use crate::scalar::Scalar;

/// The query as the search sees it: z-normalized, padded, with its envelope.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryProfile<T> {
    seq: NormalizedSeq<T>,
    envelope: Envelope<T>,
    radius: BandRadius,
}

impl<T: Scalar> QueryProfile<T> {
    pub fn new(raw: &[T], radius: BandRadius, width: usize, epsilon: T) -> Result<Self> {
        if raw.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("query contains non-finite values"));
        }
        let seq = znormalize(raw, epsilon, width)?;
        let envelope = compute_envelope(&seq, radius);
        Ok(Self { seq, envelope, radius })
    }

    pub fn seq(&self) -> &NormalizedSeq<T> {
        &self.seq
    }

    pub fn envelope(&self) -> &Envelope<T> {
        &self.envelope
    }

    pub fn radius(&self) -> BandRadius {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn row_width(&self) -> usize {
        self.seq.padded_len()
    }
}
