use crate::scalar::Scalar;

/// An owned, chronologically ordered series of samples.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries<T> {
    values: Vec<T>,
    source: Option<String>,
}

impl<T: Scalar> TimeSeries<T> {
    pub fn new(values: Vec<T>) -> Self {
        Self { values, source: None }
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.source = Some(source.into());
        self
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Where the samples came from (file path or generator description).
    pub fn source(&self) -> Option<&str> {
        self.source.as_deref()
    }

    /// Convert to another sample type, e.g. load as `f64` and search as `f32`.
    pub fn cast<U: Scalar>(&self) -> TimeSeries<U> {
        TimeSeries {
            values: self.values.iter().map(|v| U::from_f64_exact(v.as_f64())).collect(),
            source: self.source.clone(),
        }
    }
}

impl<T: Scalar> From<Vec<T>> for TimeSeries<T> {
    fn from(values: Vec<T>) -> Self {
        Self::new(values)
    }
}

impl<T> AsRef<[T]> for TimeSeries<T> {
    fn as_ref(&self) -> &[T] {
        &self.values
    }
}
