//! Discrete-time integer waveforms.
//!
//! A [`Trace`] carries every signal in the engine: reference random
//! telegraph waves, hyperspace vectors (products of references) and
//! superpositions (integer sums of products). All arithmetic is
//! sample-wise, so the value of any result at clock `t` depends only on
//! the inputs at clock `t`.

use std::fmt;

use crate::error::{InblError, Result};

#[derive(Clone, Default)]
pub struct Trace {
    samples: Vec<i64>,
    label: String,
}

impl Trace {
    /// Wraps raw samples. Rejects an empty window.
    pub fn new(samples: Vec<i64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(InblError::InvalidDimension(
                "trace needs at least one clock cycle".into(),
            ));
        }
        Ok(Self {
            samples,
            label: String::new(),
        })
    }

    pub(crate) fn from_vec(samples: Vec<i64>) -> Self {
        debug_assert!(!samples.is_empty());
        Self {
            samples,
            label: String::new(),
        }
    }

    /// Trace holding `value` at every one of `len` clocks.
    pub fn constant(len: usize, value: i64) -> Result<Self> {
        Self::new(vec![value; len])
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn samples(&self) -> &[i64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<i64> {
        self.samples
    }

    /// Number of clock cycles `T`.
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn get(&self, clock: usize) -> Option<i64> {
        self.samples.get(clock).copied()
    }

    /// True when every sample is +1 or -1.
    pub fn is_bipolar(&self) -> bool {
        self.samples.iter().all(|&s| s == 1 || s == -1)
    }

    pub fn is_constant(&self, value: i64) -> bool {
        self.samples.iter().all(|&s| s == value)
    }

    fn check_len(&self, other: &Trace) -> Result<()> {
        if self.len() != other.len() {
            return Err(InblError::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &Trace, f: impl Fn(i64, i64) -> i64) -> Result<Trace> {
        self.check_len(other)?;
        Ok(Trace::from_vec(
            self.samples
                .iter()
                .zip(&other.samples)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        ))
    }

    /// Sample-wise product (Hadamard product).
    pub fn multiply(&self, other: &Trace) -> Result<Trace> {
        self.zip_with(other, |a, b| a * b)
    }

    /// Sample-wise sum.
    pub fn add(&self, other: &Trace) -> Result<Trace> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn scaled(&self, factor: i64) -> Trace {
        Trace::from_vec(self.samples.iter().map(|&s| s * factor).collect())
    }

    /// Index of the first clock where the two traces differ.
    pub fn first_divergence(&self, other: &Trace) -> Result<Option<usize>> {
        self.check_len(other)?;
        Ok(self
            .samples
            .iter()
            .zip(&other.samples)
            .position(|(a, b)| a != b))
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().map(|&s| s as f64).sum::<f64>() / self.len() as f64
    }
}

/// Labels are metadata; two traces are equal when their samples are.
impl PartialEq for Trace {
    fn eq(&self, other: &Self) -> bool {
        self.samples == other.samples
    }
}

impl Eq for Trace {}

impl fmt::Debug for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const SHOWN: usize = 16;
        let head = &self.samples[..self.samples.len().min(SHOWN)];
        write!(f, "Trace(T={}", self.len())?;
        if !self.label.is_empty() {
            write!(f, ", label={:?}", self.label)?;
        }
        write!(f, ", {head:?}")?;
        if self.len() > SHOWN {
            write!(f, "..")?;
        }
        write!(f, ")")
    }
}

/// Free-function form of [`Trace::multiply`].
pub fn multiply_traces(a: &Trace, b: &Trace) -> Result<Trace> {
    a.multiply(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_trace_rejected() {
        assert!(matches!(
            Trace::new(vec![]),
            Err(InblError::InvalidDimension(_))
        ));
        assert!(Trace::constant(0, 1).is_err());
    }

    #[test]
    fn multiply_requires_equal_lengths() {
        let a = Trace::new(vec![1, -1, 1]).unwrap();
        let b = Trace::new(vec![1, -1]).unwrap();
        assert_eq!(
            a.multiply(&b),
            Err(InblError::LengthMismatch { left: 3, right: 2 })
        );
        assert!(a.add(&b).is_err());
    }

    #[test]
    fn product_of_bipolar_is_bipolar() {
        let a = Trace::new(vec![1, -1, 1, -1]).unwrap();
        let b = Trace::new(vec![-1, -1, 1, 1]).unwrap();
        let c = a.multiply(&b).unwrap();
        assert_eq!(c.samples(), &[-1, 1, 1, -1]);
        assert!(c.is_bipolar());
        assert!(a.multiply(&a).unwrap().is_constant(1));
    }

    #[test]
    fn equality_ignores_label() {
        let a = Trace::new(vec![2, 0]).unwrap().with_label("x");
        let b = Trace::new(vec![2, 0]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn divergence_reports_first_clock() {
        let a = Trace::new(vec![1, 1, 1, 1]).unwrap();
        let b = Trace::new(vec![1, 1, -1, -1]).unwrap();
        assert_eq!(a.first_divergence(&b).unwrap(), Some(2));
        assert_eq!(a.first_divergence(&a).unwrap(), None);
    }
}
