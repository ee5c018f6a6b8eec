//! Fourier-domain image reconstruction.
//!
//! Five algorithms, one per aperture/product combination:
//!
//! - [`linear_fft_1d`]: single-plane image from a linear aperture;
//! - [`linear_rma_2d`]: y-z volume from a linear aperture (range migration);
//! - [`rectilinear_fft_2d`]: single-plane image from a planar aperture;
//! - [`rectilinear_rma_3d`]: full volume from a planar aperture;
//! - [`circular_pfa_2d`] / [`cylindrical_pfa_3d`]: polar-format images from
//!   rotational scans;
//!
//! plus the brute-force [`backprojection`] reference, which evaluates the
//! matched filter directly per voxel and serves as the ground-truth image
//! former in tests and reports.

mod backprojection;
mod circular;
mod linear;
mod rectilinear;

pub use backprojection::backprojection;
pub use circular::{circular_pfa_2d, cylindrical_pfa_3d};
pub use linear::{linear_fft_1d, linear_rma_2d};
pub use rectilinear::{rectilinear_fft_2d, rectilinear_rma_3d};

use ndarray::ArrayD;
use num_complex::Complex;

use crate::aperture::Geometry;
use crate::axis::UniformAxis;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Requested voxel grid of a reconstruction: one uniform coordinate axis per
/// image dimension, plus the fixed plane coordinate `z0` for the single-plane
/// products.
#[derive(Debug, Clone)]
pub struct ReconGrid<T> {
    pub axes: Vec<UniformAxis<T>>,
    /// Target plane depth for 1-D/2-D single-plane products; `None` for
    /// volumetric products, whose last axis is the depth axis.
    pub z0: Option<T>,
}

impl<T: Scalar> ReconGrid<T> {
    pub fn new(axes: Vec<UniformAxis<T>>, z0: Option<T>) -> Result<Self> {
        if axes.is_empty() || axes.len() > 3 {
            return Err(Error::InvalidGrid(format!(
                "reconstruction grids are 1-D to 3-D, got {} axes",
                axes.len()
            )));
        }
        if let Some(z) = z0 {
            if !z.is_finite() {
                return Err(Error::InvalidGrid("plane depth z0 must be finite".into()));
            }
        }
        Ok(Self { axes, z0 })
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.len).collect()
    }

    pub fn ndim(&self) -> usize {
        self.axes.len()
    }

    /// Cartesian position of the voxel at `idx`, given the aperture geometry
    /// the grid is paired with. The grid axes map onto world coordinates as:
    ///
    /// - linear, 1 axis: `(0, y, z0)`; 2 axes: `(0, y, z)`;
    /// - rectilinear, 2 axes: `(x, y, z0)`; 3 axes: `(x, y, z)`;
    /// - circular, 2 axes: `(x, 0, z)`;
    /// - cylindrical, 3 axes: `(x, y, z)`.
    pub fn voxel_position(&self, geometry: Geometry, idx: &[usize]) -> Result<[T; 3]> {
        if idx.len() != self.axes.len() {
            return Err(Error::InvalidGrid("voxel index rank does not match grid".into()));
        }
        let v = |d: usize| self.axes[d].value(idx[d]);
        let z0 = || {
            self.z0
                .ok_or_else(|| Error::InvalidGrid("single-plane grid requires z0".into()))
        };
        match (geometry, self.axes.len()) {
            (Geometry::Linear, 1) => Ok([T::zero(), v(0), z0()?]),
            (Geometry::Linear, 2) => Ok([T::zero(), v(0), v(1)]),
            (Geometry::Rectilinear, 2) => Ok([v(0), v(1), z0()?]),
            (Geometry::Rectilinear, 3) => Ok([v(0), v(1), v(2)]),
            (Geometry::Circular, 2) => Ok([v(0), T::zero(), v(1)]),
            (Geometry::Cylindrical, 3) => Ok([v(0), v(1), v(2)]),
            (g, n) => Err(Error::GeometryMismatch {
                algorithm: match n {
                    1 => "1-D grid",
                    2 => "2-D grid",
                    _ => "3-D grid",
                },
                found: g.name(),
            }),
        }
    }
}

/// Transform length for an aperture axis: at least doubled (to keep the
/// periodic images of the FFT away from the scene) and long enough that the
/// inverse-transform output, spaced like the aperture, covers `extent`.
pub(crate) fn pad_len<T: Scalar>(n_aperture: usize, du: T, extent: T) -> usize {
    let cover = (extent / du)
        .ceil()
        .to_usize()
        .unwrap_or(n_aperture)
        .saturating_add(2);
    crate::spectral::next_pow2((2 * n_aperture).max(cover))
}

/// Uniform spectral axis used as an inverse-transform input for one image
/// dimension. The axis covers the physical band `[band_lo, band_hi]`, is wide
/// enough that the output sample spacing is at most `req.step`, and is dense
/// enough that the output span covers the requested extent.
pub(crate) fn image_spectral_axis<T: Scalar>(
    band_lo: T,
    band_hi: T,
    req: &UniformAxis<T>,
    min_len: usize,
) -> Result<UniformAxis<T>> {
    if !(band_hi > band_lo) {
        return Err(Error::InvalidAxis("empty spectral band".into()));
    }
    let tau = T::TAU();
    let span = (band_hi - band_lo).max(tau / req.step);
    let extent = req.span() + req.step + req.step;
    let cover = (extent * span / tau).ceil().to_usize().unwrap_or(min_len) + 2;
    let n = crate::spectral::next_pow2(min_len.max(cover));
    let center = (band_lo + band_hi) / T::from_f64_lossy(2.0);
    let half = span / T::from_f64_lossy(2.0);
    UniformAxis::from_range(center - half, center + half, n)
}

/// Nearest-bin gather of a computed image onto the requested grid axes.
/// The computed axes are denser than the request by construction, so the
/// positional error is below half a requested voxel.
pub(crate) fn resample_nearest<T: Scalar>(
    values: &ArrayD<Complex<T>>,
    computed: &[UniformAxis<T>],
    requested: &[UniformAxis<T>],
) -> ArrayD<Complex<T>> {
    assert_eq!(computed.len(), requested.len());
    let maps: Vec<Vec<usize>> = computed
        .iter()
        .zip(requested)
        .map(|(c, r)| r.iter().map(|v| c.nearest(v)).collect())
        .collect();
    let shape: Vec<usize> = requested.iter().map(|a| a.len).collect();
    ArrayD::from_shape_fn(shape, |idx| {
        let src: Vec<usize> = (0..maps.len()).map(|d| maps[d][idx[d]]).collect();
        values[src.as_slice()]
    })
}
