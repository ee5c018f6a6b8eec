//! Uniformly spaced 1-D coordinate axes.
//!
//! Every sampled dimension in the toolkit (aperture positions, wavenumber
//! bins, voxel centers) is a uniform axis, which is what the FFT-based
//! reconstructions require.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A strictly increasing, uniformly spaced axis: `value(i) = start + i*step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformAxis<T> {
    pub start: T,
    pub step: T,
    pub len: usize,
}

impl<T: Scalar> UniformAxis<T> {
    pub fn new(start: T, step: T, len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidAxis("axis must have at least one sample".into()));
        }
        if !start.is_finite() || !step.is_finite() {
            return Err(Error::InvalidAxis("axis parameters must be finite".into()));
        }
        if len > 1 && step <= T::zero() {
            return Err(Error::InvalidAxis("axis step must be positive".into()));
        }
        Ok(Self { start, step, len })
    }

    /// Axis spanning `[lo, hi]` inclusive with `len` samples.
    pub fn from_range(lo: T, hi: T, len: usize) -> Result<Self> {
        if len < 2 {
            return Self::new(lo, T::one(), len.max(1));
        }
        let step = (hi - lo) / T::from_usize(len - 1).unwrap();
        Self::new(lo, step, len)
    }

    /// Axis of `len` samples with spacing `step`, centered on `center`.
    pub fn centered(center: T, step: T, len: usize) -> Result<Self> {
        let half = T::from_usize(len / 2).unwrap();
        Self::new(center - half * step, step, len)
    }

    pub fn value(&self, i: usize) -> T {
        self.start + T::from_usize(i).unwrap() * self.step
    }

    pub fn end(&self) -> T {
        self.value(self.len - 1)
    }

    pub fn span(&self) -> T {
        self.end() - self.start
    }

    pub fn values(&self) -> Vec<T> {
        (0..self.len).map(|i| self.value(i)).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.len).map(|i| self.value(i))
    }

    /// Index of the sample closest to `v` (clamped to the axis).
    pub fn nearest(&self, v: T) -> usize {
        if self.len == 1 {
            return 0;
        }
        let idx = ((v - self.start) / self.step).round();
        if idx <= T::zero() {
            0
        } else {
            (idx.to_usize().unwrap_or(self.len - 1)).min(self.len - 1)
        }
    }

    pub fn contains(&self, v: T) -> bool {
        v >= self.start && v <= self.end()
    }

    /// Spectral axis conjugate to this spatial axis under the DFT:
    /// spacing `2*pi/(len*step)`, zero-centered (bin `len/2` is DC).
    pub fn conjugate_spectral(&self) -> UniformAxis<T> {
        let n = T::from_usize(self.len).unwrap();
        let dk = T::TAU() / (n * self.step);
        let c = T::from_usize(self.len / 2).unwrap();
        UniformAxis {
            start: -c * dk,
            step: dk,
            len: self.len,
        }
    }
}
