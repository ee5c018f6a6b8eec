//! FMCW chirp waveform parameters and the derived quantities used throughout
//! the toolkit: the fast-time wavenumber axis, range resolution, and maximum
//! unambiguous range.
//!
//! An FMCW chirp ramps its instantaneous frequency linearly,
//! `f(t) = f0 + K*t`, sweeping a bandwidth `B = K*T`. After dechirping, a
//! point target at range `R` produces the beat sample `exp(j*2*k*R)` where
//! `k(t) = 2*pi*f(t)/c` is the one-way wavenumber. Sampling fast time
//! uniformly therefore samples `k` uniformly, which is what every
//! reconstruction here relies on.

use crate::axis::UniformAxis;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// FMCW waveform parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChirpConfig<T> {
    /// Start frequency f0 (Hz).
    pub f0: T,
    /// Chirp slope K (Hz/s). May be zero for a CW tone.
    pub slope: T,
    /// Chirp duration T (s).
    pub duration: T,
    /// ADC sampling rate (Hz).
    pub fs: T,
    /// Number of fast-time samples.
    pub num_samples: usize,
}

impl<T: Scalar> ChirpConfig<T> {
    pub fn new(f0: T, slope: T, duration: T, fs: T, num_samples: usize) -> Result<Self> {
        if !(f0 > T::zero()) {
            return Err(Error::InvalidChirp("start frequency must be positive".into()));
        }
        if slope < T::zero() {
            return Err(Error::InvalidChirp("chirp slope must be non-negative".into()));
        }
        if !(duration > T::zero()) {
            return Err(Error::InvalidChirp("chirp duration must be positive".into()));
        }
        if !(fs > T::zero()) {
            return Err(Error::InvalidChirp("sampling rate must be positive".into()));
        }
        if num_samples < 2 {
            return Err(Error::InvalidChirp("need at least 2 fast-time samples".into()));
        }
        Ok(Self { f0, slope, duration, fs, num_samples })
    }

    /// Swept bandwidth `B = K*T` (Hz).
    pub fn bandwidth(&self) -> T {
        self.slope * self.duration
    }

    /// Wavelength at the start frequency (m).
    pub fn wavelength(&self) -> T {
        T::speed_of_light() / self.f0
    }

    /// One-way wavenumber axis `k[i] = (2*pi/c)*(f0 + K*t_i)` (rad/m), with
    /// `num_samples` uniform fast-time samples spanning `[0, T]` inclusive.
    pub fn wavenumber_axis(&self) -> UniformAxis<T> {
        let two_pi_over_c = T::TAU() / T::speed_of_light();
        let start = two_pi_over_c * self.f0;
        let n = T::from_usize(self.num_samples - 1).unwrap();
        let step = two_pi_over_c * self.slope * self.duration / n;
        UniformAxis { start, step, len: self.num_samples }
    }

    /// Range resolution `c/(2B)` (m).
    pub fn range_resolution(&self) -> Result<T> {
        let b = self.bandwidth();
        if !(b > T::zero()) {
            return Err(Error::InvalidChirp("range resolution requires B = K*T > 0".into()));
        }
        let two = T::from_f64_lossy(2.0);
        Ok(T::speed_of_light() / (two * b))
    }

    /// Maximum unambiguous range `fs*c/(2K)` (m).
    pub fn max_range(&self) -> Result<T> {
        if !(self.slope > T::zero()) {
            return Err(Error::InvalidChirp("maximum range requires K > 0".into()));
        }
        let two = T::from_f64_lossy(2.0);
        Ok(self.fs * T::speed_of_light() / (two * self.slope))
    }
}

/// Range resolution `c/(2B)` for a given bandwidth (m).
pub fn range_resolution_for_bandwidth<T: Scalar>(bandwidth: T) -> Result<T> {
    if !(bandwidth > T::zero()) {
        return Err(Error::InvalidChirp("bandwidth must be positive".into()));
    }
    Ok(T::speed_of_light() / (T::from_f64_lossy(2.0) * bandwidth))
}
