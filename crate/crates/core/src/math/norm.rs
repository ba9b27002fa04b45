use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Trailing zeros needed to round `n` up to a multiple of `width`.
pub fn padding_for(n: usize, width: usize) -> usize {
    let width = width.max(1);
    (width - n % width) % width
}

/// A z-normalized sequence stored with trailing zero padding.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedSeq<T> {
    values: Vec<T>,
    len: usize,
}

impl<T: Scalar> NormalizedSeq<T> {
    /// Wrap already-normalized values, padding them to a multiple of `width`.
    pub fn from_normalized(mut values: Vec<T>, width: usize) -> Self {
        let len = values.len();
        values.resize(len + padding_for(len, width), T::zero());
        Self { values, len }
    }

    /// Logical samples, without padding.
    pub fn values(&self) -> &[T] {
        &self.values[..self.len]
    }

    /// Samples followed by the zero padding.
    pub fn padded(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn padded_len(&self) -> usize {
        self.values.len()
    }
}

/// Z-normalize `raw` and pad the result to a multiple of `width`.
///
/// Sequences whose standard deviation is below `epsilon` (including exactly
/// constant ones) normalize to all zeros.
pub fn znormalize<T: Scalar>(raw: &[T], epsilon: T, width: usize) -> Result<NormalizedSeq<T>> {
    if raw.is_empty() {
        return Err(Error::invalid("cannot normalize an empty sequence"));
    }
    if epsilon.is_nan() || epsilon <= T::zero() {
        return Err(Error::invalid("normalization epsilon must be positive"));
    }
    let mut values = vec![T::zero(); raw.len() + padding_for(raw.len(), width)];
    znormalize_into(raw, epsilon, &mut values[..raw.len()]);
    Ok(NormalizedSeq { values, len: raw.len() })
}

/// Write the z-normalized form of `raw` into `out[..raw.len()]`.
///
/// Mean and variance are taken in two passes; the single-pass
/// `E[x²] − μ²` form loses most of its digits on offset random walks.
/// The second pass also sums the deviations, and their residual is taken out
/// of the output, which keeps its mean near zero for large offsets.
pub fn znormalize_into<T: Scalar>(raw: &[T], epsilon: T, out: &mut [T]) {
    let n = T::from_usize(raw.len()).unwrap_or_else(T::one);
    let (mut lo, mut hi) = (raw[0], raw[0]);
    let mut sum = T::zero();
    for &x in raw {
        sum = sum + x;
        lo = lo.min(x);
        hi = hi.max(x);
    }
    let out = &mut out[..raw.len()];
    if lo == hi {
        out.fill(T::zero());
        return;
    }
    let mean = sum / n;
    let (mut dsum, mut dsq) = (T::zero(), T::zero());
    for &x in raw {
        let d = x - mean;
        dsum = dsum + d;
        dsq = dsq + d * d;
    }
    // rounding residual of the first mean; subtracted from the deviations
    // rather than added to `mean`, where it would be rounded away again
    let residual = dsum / n;
    let var = ((dsq - dsum * residual) / n).max(T::zero());
    let sigma = var.sqrt();
    if sigma < epsilon {
        out.fill(T::zero());
        return;
    }
    for (o, &x) in out.iter_mut().zip(raw) {
        *o = (x - mean - residual) / sigma;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mean_std(v: &[f64]) -> (f64, f64) {
        let n = v.len() as f64;
        let m = v.iter().sum::<f64>() / n;
        let s = (v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / n).sqrt();
        (m, s)
    }

    #[test]
    fn constant_maps_to_zeros() {
        let z = znormalize(&[5.0, 5.0, 5.0], 1e-12, 4).unwrap();
        assert_eq!(z.padded(), &[0.0, 0.0, 0.0, 0.0]);
        assert_eq!(z.len(), 3);
        assert_eq!(z.padded_len(), 4);
    }

    #[test]
    fn one_two_three() {
        // mu = 2, sigma = sqrt(2/3)
        let s = (2.0f64 / 3.0).sqrt();
        let z = znormalize(&[1.0, 2.0, 3.0], 1e-12, 8).unwrap();
        let expect = [-1.0 / s, 0.0, 1.0 / s];
        for (a, b) in z.values().iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((z.values()[0] + 1.224_744_871_391_589).abs() < 1e-12);
        assert_eq!(z.padded_len(), 8);
        assert!(z.padded()[3..].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn fixed_point() {
        let x = [-1.0f64, 1.0, -1.0, 1.0];
        let z = znormalize(&x, 1e-12, 1).unwrap();
        for (a, b) in z.values().iter().zip(x) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn empty_and_bad_epsilon_rejected() {
        assert!(matches!(znormalize::<f64>(&[], 1e-12, 8), Err(Error::InvalidArgument(_))));
        assert!(znormalize(&[1.0, 2.0], 0.0, 8).is_err());
    }

    #[test]
    fn near_constant_hits_guard() {
        let z = znormalize(&[1.0, 1.0 + 1e-15, 1.0], 1e-12, 1).unwrap();
        assert!(z.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn padding_rule() {
        assert_eq!(padding_for(3, 4), 1);
        assert_eq!(padding_for(8, 4), 0);
        assert_eq!(padding_for(5, 1), 0);
        assert_eq!(padding_for(128, 8), 0);
        assert_eq!(padding_for(130, 8), 6);
    }

    #[test]
    fn f32_normalizes() {
        let z = znormalize(&[1.0f32, 2.0, 3.0], 1e-6, 8).unwrap();
        assert!((z.values()[2] - 1.224_744_9).abs() < 1e-5);
    }

    proptest::proptest! {
        #[test]
        fn affine_invariance(
            xs in proptest::collection::vec(-100.0f64..100.0, 2..64),
            a in 0.01f64..100.0,
            b in -1e3f64..1e3,
        ) {
            let (_, s) = mean_std(&xs);
            proptest::prop_assume!(s > 1e-3);
            let ys: Vec<f64> = xs.iter().map(|x| a * x + b).collect();
            let zx = znormalize(&xs, 1e-12, 8).unwrap();
            let zy = znormalize(&ys, 1e-12, 8).unwrap();
            for (u, v) in zx.values().iter().zip(zy.values()) {
                proptest::prop_assert!((u - v).abs() < 1e-6);
            }
            let (m, s) = mean_std(zx.values());
            proptest::prop_assert!(m.abs() < 1e-9);
            proptest::prop_assert!((s - 1.0).abs() < 1e-6);
        }
    }
}
