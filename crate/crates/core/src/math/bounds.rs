use super::envelope::Envelope;
use super::norm::NormalizedSeq;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, actual })
    }
}

/// Squared Euclidean distance over the logical samples.
pub fn squared_euclid<T: Scalar>(a: &NormalizedSeq<T>, b: &NormalizedSeq<T>) -> Result<T> {
    check_len(a.len(), b.len())?;
    Ok(sq_euclid(a.values(), b.values()))
}

/// Squared distance between the first points plus that between the last points.
pub fn lb_kim_fl<T: Scalar>(q: &NormalizedSeq<T>, c: &NormalizedSeq<T>) -> Result<T> {
    check_len(q.len(), c.len())?;
    Ok(kim_fl(q.values(), c.values()))
}

/// Squared excursion of `c` outside the query envelope.
pub fn lb_keogh_ec<T: Scalar>(c: &NormalizedSeq<T>, env_of_q: &Envelope<T>) -> Result<T> {
    check_len(env_of_q.upper.len(), c.padded_len())?;
    check_len(env_of_q.lower.len(), c.padded_len())?;
    Ok(keogh(c.padded(), &env_of_q.upper, &env_of_q.lower))
}

/// Squared excursion of the query outside the candidate envelope.
pub fn lb_keogh_eq<T: Scalar>(q: &NormalizedSeq<T>, env_of_c: &Envelope<T>) -> Result<T> {
    lb_keogh_ec(q, env_of_c)
}

pub fn sq_euclid<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| {
        let d = x - y;
        acc + d * d
    })
}

/// Endpoint bound. For a single-sample sequence the two endpoints coincide
/// and are counted once.
pub fn kim_fl<T: Scalar>(q: &[T], c: &[T]) -> T {
    let n = q.len();
    if n == 0 {
        return T::zero();
    }
    let first = q[0] - c[0];
    if n == 1 {
        return first * first;
    }
    let last = q[n - 1] - c[n - 1];
    first * first + last * last
}

/// Envelope bound over equally shaped slices. Summed in index order, which
/// keeps the rounded bound below the rounded DP value whenever the exact
/// bound is below the exact DP value.
pub fn keogh<T: Scalar>(c: &[T], upper: &[T], lower: &[T]) -> T {
    let zero = T::zero();
    c.iter().zip(upper).zip(lower).fold(zero, |acc, ((&x, &u), &l)| {
        let d = if x > u {
            x - u
        } else if x < l {
            x - l
        } else {
            zero
        };
        acc + d * d
    })
}
