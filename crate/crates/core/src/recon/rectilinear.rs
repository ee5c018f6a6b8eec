//! Reconstruction from rectilinear (planar) apertures.

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

fn rectilinear_axes<'a, T: Scalar>(
    cube: &'a BeatCube<T>,
    algorithm: &'static str,
) -> Result<(&'a UniformAxis<T>, &'a UniformAxis<T>, T)> {
    match &cube.aperture {
        Aperture::Rectilinear { x, y, standoff } => Ok((x, y, *standoff)),
        other => Err(Error::GeometryMismatch {
            algorithm,
            found: other.geometry().name(),
        }),
    }
}

/// Pads and forward-transforms both aperture dimensions of a planar cube.
fn plane_spectrum<T: Scalar>(
    samples: &ArrayD<Complex<T>>,
    x_ap: &UniformAxis<T>,
    y_ap: &UniformAxis<T>,
    k: UniformAxis<T>,
    req_x: &UniformAxis<T>,
    req_y: &UniformAxis<T>,
) -> Result<SpectralGrid<T>> {
    let nx_pad = pad_len(x_ap.len, x_ap.step, req_x.span());
    let ny_pad = pad_len(y_ap.len, y_ap.step, req_y.span());
    let (padded, x_pad) = zero_pad_axis(samples, 0, x_ap, nx_pad);
    let (padded, y_pad) = zero_pad_axis(&padded, 1, y_ap, ny_pad);
    ft_nd(&padded, &[x_pad, y_pad, k], &[0, 1])
}

/// Single-plane 2-D image at depth `grid.z0` from a planar aperture:
/// transform both aperture dimensions, weight each spectral sample by
/// `k_z * exp(-j*k_z*(z0 - Z0))` with `k_z = sqrt(4k^2 - k_x^2 - k_y^2)`
/// (evanescent samples dropped), sum over the band, and invert.
pub fn rectilinear_fft_2d<T: Scalar>(cube: &BeatCube<T>, grid: &ReconGrid<T>) -> Result<ImageVolume<T>> {
    let (x_ap, y_ap, z_ap) = rectilinear_axes(cube, "rectilinear_fft_2d")?;
    if grid.ndim() != 2 {
        return Err(Error::InvalidGrid("rectilinear_fft_2d produces a 2-D image".into()));
    }
    let z0 = grid
        .z0
        .ok_or_else(|| Error::InvalidGrid("rectilinear_fft_2d requires the plane depth z0".into()))?;
    let (req_x, req_y) = (grid.axes[0], grid.axes[1]);

    let spec = plane_spectrum(&cube.samples, x_ap, y_ap, cube.k, &req_x, &req_y)?;
    let (kx, ky) = (spec.axes[0], spec.axes[1]);

    let four = T::from_f64_lossy(4.0);
    let depth = z0 - z_ap;
    let k_vals = cube.k.values();
    let zero = Complex::new(T::zero(), T::zero());
    let mut plane = ArrayD::from_elem(ndarray::IxDyn(&[kx.len, ky.len]), zero);
    for ix in 0..kx.len {
        let kx2 = kx.value(ix) * kx.value(ix);
        for iy in 0..ky.len {
            let perp = kx2 + ky.value(iy) * ky.value(iy);
            let mut acc = zero;
            for (j, &kj) in k_vals.iter().enumerate() {
                let disc = four * kj * kj - perp;
                if disc > T::zero() {
                    let kz = disc.sqrt();
                    acc += spec.values[[ix, iy, j]] * Complex::from_polar(kz, -kz * depth);
                }
            }
            plane[[ix, iy]] = acc;
        }
    }

    let harmonic = SpectralGrid::new(plane, vec![kx, ky])?;
    let centers = [req_x.value(req_x.len / 2), req_y.value(req_y.len / 2)];
    let (img, axes) = ift_nd(&harmonic, &[0, 1], &centers)?;
    let values = resample_nearest(&img, &axes, &grid.axes);
    ImageVolume::new(values, grid.axes.clone())
}

/// Full 3-D volume from a planar aperture by range migration: conjugate the
/// cube, transform both aperture dimensions, weight by
/// `k_z * exp(-j*k_z*Z0)`, Stolt-map onto a uniform `k_z` grid, and invert
/// in all three dimensions.
pub fn rectilinear_rma_3d<T: Scalar>(cube: &BeatCube<T>, grid: &ReconGrid<T>) -> Result<ImageVolume<T>> {
    let (x_ap, y_ap, z_ap) = rectilinear_axes(cube, "rectilinear_rma_3d")?;
    if grid.ndim() != 3 {
        return Err(Error::InvalidGrid("rectilinear_rma_3d produces a 3-D volume".into()));
    }
    let (req_x, req_y, req_z) = (grid.axes[0], grid.axes[1], grid.axes[2]);

    let conj = cube.samples.mapv(|v| v.conj());
    let mut spec = plane_spectrum(&conj, x_ap, y_ap, cube.k, &req_x, &req_y)?;
    let (kx, ky) = (spec.axes[0], spec.axes[1]);

    // the k_z amplitude factor is applied at the source dispersion points;
    // the exp(-j*k_z*Z0) phase is folded into the Stolt resampling
    let four = T::from_f64_lossy(4.0);
    let k_vals = cube.k.values();
    for ix in 0..kx.len {
        let kx2 = kx.value(ix) * kx.value(ix);
        for iy in 0..ky.len {
            let perp = kx2 + ky.value(iy) * ky.value(iy);
            for (j, &kj) in k_vals.iter().enumerate() {
                let disc = four * kj * kj - perp;
                let w = if disc > T::zero() { disc.sqrt() } else { T::zero() };
                let v = &mut spec.values[[ix, iy, j]];
                *v = *v * Complex::new(w, T::zero());
            }
        }
    }

    let ky_max = ky.start.abs().max(ky.end().abs());
    let kx_max = kx.start.abs().max(kx.end().abs());
    let perp_max = kx_max * kx_max + ky_max * ky_max;
    let two = T::from_f64_lossy(2.0);
    let band_hi = two * cube.k.end();
    let band_lo = (four * cube.k.start * cube.k.start - perp_max).max(T::zero()).sqrt();
    let kz = image_spectral_axis(band_lo, band_hi, &req_z, next_pow2(2 * cube.k.len))?;

    let mapped = stolt_resample(&spec, kz, z_ap)?;
    let centers = [
        req_x.value(req_x.len / 2),
        req_y.value(req_y.len / 2),
        req_z.value(req_z.len / 2),
    ];
    let (img, axes) = ift_nd(&mapped, &[0, 1, 2], &centers)?;
    let values = resample_nearest(&img, &axes, &grid.axes);
    ImageVolume::new(values, grid.axes.clone())
}
