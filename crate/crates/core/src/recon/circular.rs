//! Polar-format reconstruction from circular and cylindrical scans.
//!
//! The rotational scan is compressed against the reference response of the
//! scene center in the angular-harmonic domain; the compressed data are then
//! samples of the image spectrum on a polar grid (angle = scan angle, radius
//! set by the dispersion relation), which a bilinear regrid maps onto a
//! rectangular spectral grid for the final inverse transform.

use ndarray::{ArrayD, Ix2, Ix3};
use num_complex::Complex;

use crate::aperture::Aperture;
use crate::cube::BeatCube;
use crate::error::{Error, Result};
use crate::image::ImageVolume;
use crate::scalar::Scalar;
use crate::spectral::{
    ft_nd, ift_nd, polar_regrid_2d, polar_regrid_cylindrical, zero_pad_axis, SpectralGrid,
};

use super::{image_spectral_axis, pad_len, resample_nearest, ReconGrid};

/// 2-D x-z image from a circular scan of radius `R0`. The reference kernel is
/// `g(theta; k) = exp(j*2k*R0*cos(theta))`; compression multiplies the
/// angular spectrum of the data by `conj(FT_theta[g])`, and the compressed
/// samples live on the polar grid `(alpha = theta, k_r = 2k)`.
pub fn circular_pfa_2d<T: Scalar>(cube: &BeatCube<T>, grid: &ReconGrid<T>) -> Result<ImageVolume<T>> {
    let (theta, radius) = match &cube.aperture {
        Aperture::Circular { theta, radius } => (*theta, *radius),
        other => {
            return Err(Error::GeometryMismatch {
                algorithm: "circular_pfa_2d",
                found: other.geometry().name(),
            })
        }
    };
    if grid.ndim() != 2 {
        return Err(Error::InvalidGrid("circular_pfa_2d produces a 2-D (x, z) image".into()));
    }
    if cube.k.len < 2 {
        return Err(Error::InvalidAxis("polar formatting needs at least two wavenumber bins".into()));
    }
    let (req_x, req_z) = (grid.axes[0], grid.axes[1]);

    // angular spectra of data and reference
    let spec = ft_nd(&cube.samples, &[theta, cube.k], &[0])?;
    let two = T::from_f64_lossy(2.0);
    let mut g = ArrayD::from_elem(
        ndarray::IxDyn(&[theta.len, cube.k.len]),
        Complex::new(T::zero(), T::zero()),
    );
    let k_vals = cube.k.values();
    for (it, t) in theta.iter().enumerate() {
        let c = t.cos();
        for (j, &kj) in k_vals.iter().enumerate() {
            g[[it, j]] = Complex::from_polar(T::one(), two * kj * radius * c);
        }
    }
    let g_spec = ft_nd(&g, &[theta, cube.k], &[0])?;

    let mut compressed = spec.values;
    for (v, r) in compressed.iter_mut().zip(g_spec.values.iter()) {
        *v = *v * r.conj();
    }
    let compressed = SpectralGrid::new(compressed, spec.axes)?;
    let center = theta.value(theta.len / 2);
    let (polar, _) = ift_nd(&compressed, &[0], &[center])?;

    // polar spectrum samples at radius 2k -> rectangular spectrum
    let kr: Vec<T> = k_vals.iter().map(|&k| two * k).collect();
    let kr_max = *kr.last().unwrap();
    let kx = image_spectral_axis(-kr_max, kr_max, &req_x, 16)?;
    let kz = image_spectral_axis(-kr_max, kr_max, &req_z, 16)?;
    let polar2 = polar.into_dimensionality::<Ix2>().unwrap();
    let plane = polar_regrid_2d(&theta, &kr, polar2.view(), &kx, &kz)?;

    let rect = SpectralGrid::new(plane.into_dyn(), vec![kx, kz])?;
    let centers = [req_x.value(req_x.len / 2), req_z.value(req_z.len / 2)];
    let (img, axes) = ift_nd(&rect, &[0, 1], &centers)?;
    let values = resample_nearest(&img, &axes, &grid.axes);
    ImageVolume::new(values, grid.axes.clone())
}

/// 3-D x-y-z volume from a cylindrical scan. The vertical dimension is
/// transformed first; each `(k_y, k)` slice is then a circular problem with
/// in-plane radial wavenumber `k_r = sqrt(4k^2 - k_y^2)` and reference
/// `exp(j*k_r*R0*cos(theta))` (evanescent slices are dropped).
pub fn cylindrical_pfa_3d<T: Scalar>(cube: &BeatCube<T>, grid: &ReconGrid<T>) -> Result<ImageVolume<T>> {
    let (theta, y_ap, radius) = match &cube.aperture {
        Aperture::Cylindrical { theta, y, radius } => (*theta, *y, *radius),
        other => {
            return Err(Error::GeometryMismatch {
                algorithm: "cylindrical_pfa_3d",
                found: other.geometry().name(),
            })
        }
    };
    if grid.ndim() != 3 {
        return Err(Error::InvalidGrid("cylindrical_pfa_3d produces a 3-D volume".into()));
    }
    if cube.k.len < 2 {
        return Err(Error::InvalidAxis("polar formatting needs at least two wavenumber bins".into()));
    }
    let (req_x, req_y, req_z) = (grid.axes[0], grid.axes[1], grid.axes[2]);

    let ny_pad = pad_len(y_ap.len, y_ap.step, req_y.span());
    let (padded, y_pad) = zero_pad_axis(&cube.samples, 1, &y_ap, ny_pad);
    let spec = ft_nd(&padded, &[theta, y_pad, cube.k], &[0, 1])?;
    let ky = spec.axes[1];

    // reference kernel per (k_y, k) slice
    let four = T::from_f64_lossy(4.0);
    let k_vals = cube.k.values();
    let zero = Complex::new(T::zero(), T::zero());
    let mut g = ArrayD::from_elem(ndarray::IxDyn(&[theta.len, ky.len, cube.k.len]), zero);
    for iy in 0..ky.len {
        let ky2 = ky.value(iy) * ky.value(iy);
        for (j, &kj) in k_vals.iter().enumerate() {
            let disc = four * kj * kj - ky2;
            if disc <= T::zero() {
                continue;
            }
            let kr = disc.sqrt();
            for (it, t) in theta.iter().enumerate() {
                g[[it, iy, j]] = Complex::from_polar(T::one(), kr * radius * t.cos());
            }
        }
    }
    let g_spec = ft_nd(&g, &[theta, ky, cube.k], &[0])?;

    let mut compressed = spec.values;
    for (v, r) in compressed.iter_mut().zip(g_spec.values.iter()) {
        *v = *v * r.conj();
    }
    let compressed = SpectralGrid::new(compressed, spec.axes)?;
    let center = theta.value(theta.len / 2);
    let (polar, _) = ift_nd(&compressed, &[0], &[center])?;

    let two = T::from_f64_lossy(2.0);
    let kr_max = two * cube.k.end();
    let kx = image_spectral_axis(-kr_max, kr_max, &req_x, 16)?;
    let kz = image_spectral_axis(-kr_max, kr_max, &req_z, 16)?;
    let polar3 = polar.into_dimensionality::<Ix3>().unwrap();
    let volume = polar_regrid_cylindrical(&theta, &ky, &cube.k, polar3.view(), &kx, &kz)?;

    let rect = SpectralGrid::new(volume.into_dyn(), vec![kx, ky, kz])?;
    let centers = [
        req_x.value(req_x.len / 2),
        req_y.value(req_y.len / 2),
        req_z.value(req_z.len / 2),
    ];
    let (img, axes) = ift_nd(&rect, &[0, 1, 2], &centers)?;
    let values = resample_nearest(&img, &axes, &grid.axes);
    ImageVolume::new(values, grid.axes.clone())
}
