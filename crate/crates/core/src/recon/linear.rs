//! Reconstruction from linear (1-D vertical) apertures.

use ndarray::ArrayD;
use num_complex::Complex;

use crate::aperture::Aperture;
use crate::axis::UniformAxis;
use crate::cube::BeatCube;
use crate::error::{Error, Result};
use crate::image::ImageVolume;
use crate::scalar::Scalar;
use crate::spectral::{ft_nd, ift_nd, next_pow2, stolt_resample, zero_pad_axis, SpectralGrid};

use super::{image_spectral_axis, pad_len, resample_nearest, ReconGrid};

fn linear_axes<'a, T: Scalar>(
    cube: &'a BeatCube<T>,
    algorithm: &'static str,
) -> Result<(&'a UniformAxis<T>, T)> {
    match &cube.aperture {
        Aperture::Linear { y, standoff } => Ok((y, *standoff)),
        other => Err(Error::GeometryMismatch {
            algorithm,
            found: other.geometry().name(),
        }),
    }
}

/// Single-plane 1-D image at depth `grid.z0` from a linear aperture:
/// transform the aperture dimension, back-propagate each wavenumber slice to
/// the target plane with the dispersion phase `exp(-j*k_z*(z0 - Z0))`,
/// `k_z = sqrt(4k^2 - k_y^2)`, sum over the band, and invert the transform.
pub fn linear_fft_1d<T: Scalar>(cube: &BeatCube<T>, grid: &ReconGrid<T>) -> Result<ImageVolume<T>> {
    let (y_ap, z_ap) = linear_axes(cube, "linear_fft_1d")?;
    if grid.ndim() != 1 {
        return Err(Error::InvalidGrid("linear_fft_1d produces a 1-D image".into()));
    }
    let z0 = grid
        .z0
        .ok_or_else(|| Error::InvalidGrid("linear_fft_1d requires the plane depth z0".into()))?;
    let req_y = grid.axes[0];

    let n_pad = pad_len(y_ap.len, y_ap.step, req_y.span());
    let (padded, y_pad) = zero_pad_axis(&cube.samples, 0, y_ap, n_pad);
    let spec = ft_nd(&padded, &[y_pad, cube.k], &[0])?;
    let ky = spec.axes[0];

    let four = T::from_f64_lossy(4.0);
    let depth = z0 - z_ap;
    let k_vals = cube.k.values();
    let zero = Complex::new(T::zero(), T::zero());
    let mut profile = ArrayD::from_elem(ndarray::IxDyn(&[n_pad]), zero);
    for iy in 0..n_pad {
        let ky_v = ky.value(iy);
        let ky2 = ky_v * ky_v;
        let mut acc = zero;
        for (j, &kj) in k_vals.iter().enumerate() {
            let disc = four * kj * kj - ky2;
            if disc > T::zero() {
                acc += spec.values[[iy, j]] * Complex::from_polar(T::one(), -disc.sqrt() * depth);
            }
        }
        profile[[iy]] = acc;
    }

    let harmonic = SpectralGrid::new(profile, vec![ky])?;
    let center = req_y.value(req_y.len / 2);
    let (img, axes) = ift_nd(&harmonic, &[0], &[center])?;
    let values = resample_nearest(&img, &axes, &grid.axes);
    ImageVolume::new(values, grid.axes.clone())
}

/// y-z volume from a linear aperture by range migration: conjugate the cube,
/// transform the aperture dimension, Stolt-map `(k_y, k)` onto a uniform
/// `(k_y, k_z)` grid with the aperture-plane phase `exp(-j*k_z*Z0)`, then
/// invert in both dimensions.
pub fn linear_rma_2d<T: Scalar>(cube: &BeatCube<T>, grid: &ReconGrid<T>) -> Result<ImageVolume<T>> {
    let (y_ap, z_ap) = linear_axes(cube, "linear_rma_2d")?;
    if grid.ndim() != 2 {
        return Err(Error::InvalidGrid("linear_rma_2d produces a 2-D (y, z) image".into()));
    }
    let req_y = grid.axes[0];
    let req_z = grid.axes[1];

    let conj = cube.samples.mapv(|v| v.conj());
    let n_pad = pad_len(y_ap.len, y_ap.step, req_y.span());
    let (padded, y_pad) = zero_pad_axis(&conj, 0, y_ap, n_pad);
    let spec = ft_nd(&padded, &[y_pad, cube.k], &[0])?;

    let ky = spec.axes[0];
    let ky_max = ky.start.abs().max(ky.end().abs());
    let four = T::from_f64_lossy(4.0);
    let two = T::from_f64_lossy(2.0);
    let band_hi = two * cube.k.end();
    let band_lo = (four * cube.k.start * cube.k.start - ky_max * ky_max)
        .max(T::zero())
        .sqrt();
    let kz = image_spectral_axis(band_lo, band_hi, &req_z, next_pow2(2 * cube.k.len))?;

    let mapped = stolt_resample(&spec, kz, z_ap)?;
    let centers = [req_y.value(req_y.len / 2), req_z.value(req_z.len / 2)];
    let (img, axes) = ift_nd(&mapped, &[0, 1], &centers)?;
    let values = resample_nearest(&img, &axes, &grid.axes);
    ImageVolume::new(values, grid.axes.clone())
}
