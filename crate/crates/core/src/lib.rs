//! Near-field FMCW SAR toolkit: beat-signal simulation for point-scatterer
//! scenes over linear, rectilinear, circular, and cylindrical synthetic
//! apertures, plus Fourier-domain image reconstruction (FFT imaging, range
//! migration with Stolt interpolation, polar formatting) and a simulation of
//! the position-synchronized dual-radar trigger chain.
//!
//! All numerics are generic over the scalar type through [`Scalar`]
//! (`f32` or `f64`); concrete aliases for the common `f64` instantiation are
//! exported at the crate root.

pub mod aperture;
pub mod axis;
pub mod beat;
pub mod chirp;
pub mod cube;
pub mod error;
pub mod image;
pub mod recon;
pub mod scalar;
pub mod scene;
pub mod spectral;
pub mod sync;

pub use aperture::Aperture;
pub use axis::UniformAxis;
pub use beat::{CalibrationResult, CaptureErrors, DualRadarLayout};
pub use chirp::ChirpConfig;
pub use cube::BeatCube;
pub use error::{Error, Result};
pub use image::ImageVolume;
pub use recon::ReconGrid;
pub use scalar::Scalar;
pub use scene::{Scatterer, Scene};
pub use spectral::SpectralGrid;

/// Speed of light in vacuum (m/s), exact.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

// Concrete `f64` instantiations of the core types.
pub type ChirpConfig64 = ChirpConfig<f64>;
pub type Aperture64 = Aperture<f64>;
pub type Scene64 = Scene<f64>;
pub type BeatCube64 = BeatCube<f64>;
pub type ImageVolume64 = ImageVolume<f64>;
pub type SpectralGrid64 = SpectralGrid<f64>;
pub type ReconGrid64 = ReconGrid<f64>;
pub type UniformAxis64 = UniformAxis<f64>;
