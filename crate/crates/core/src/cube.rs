//! Beat-signal captures: complex samples indexed by aperture element and
//! fast-time wavenumber bin.

use ndarray::ArrayD;
use num_complex::Complex;

use crate::aperture::Aperture;
use crate::axis::UniformAxis;
use crate::chirp::ChirpConfig;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Complex beat samples over an aperture. The sample array has shape
/// `aperture.grid_shape() + [k.len]`, the wavenumber bin being the last axis.
#[derive(Debug, Clone)]
pub struct BeatCube<T> {
    pub samples: ArrayD<Complex<T>>,
    pub aperture: Aperture<T>,
    /// Fast-time wavenumber axis (rad/m). Derived from the chirp for
    /// simulated captures; synthetic for merged dual-band cubes.
    pub k: UniformAxis<T>,
    /// Originating chirp, when the cube came from a single waveform.
    pub chirp: Option<ChirpConfig<T>>,
}

impl<T: Scalar> BeatCube<T> {
    pub fn new(
        samples: ArrayD<Complex<T>>,
        aperture: Aperture<T>,
        k: UniformAxis<T>,
        chirp: Option<ChirpConfig<T>>,
    ) -> Result<Self> {
        let mut expect = aperture.grid_shape();
        expect.push(k.len);
        if samples.shape() != expect.as_slice() {
            return Err(Error::DimensionMismatch(format!(
                "beat cube shape {:?} does not match aperture x wavenumber shape {:?}",
                samples.shape(),
                expect
            )));
        }
        if samples.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::DimensionMismatch("beat cube contains non-finite samples".into()));
        }
        Ok(Self { samples, aperture, k, chirp })
    }

    pub fn num_k(&self) -> usize {
        self.k.len
    }

    /// Element-wise difference, used for empty-scene background subtraction.
    pub fn subtract_background(&self, background: &BeatCube<T>) -> Result<BeatCube<T>> {
        if self.samples.shape() != background.samples.shape() {
            return Err(Error::DimensionMismatch(
                "background cube shape differs from capture".into(),
            ));
        }
        Ok(BeatCube {
            samples: &self.samples - &background.samples,
            aperture: self.aperture.clone(),
            k: self.k,
            chirp: self.chirp,
        })
    }
}
