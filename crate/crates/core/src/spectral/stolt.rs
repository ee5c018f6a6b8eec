//! Stolt interpolation: resampling spectral data from a uniform wavenumber
//! grid `k` onto a uniform `k_z` grid along the dispersion curve
//! `k_z(k) = sqrt(4k^2 - k_perp^2)`.

use ndarray::ArrayD;
use num_complex::Complex;
use rayon::prelude::*;

use crate::axis::UniformAxis;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spectral::SpectralGrid;

/// Resamples `spec`, whose last axis is the (uniform, positive) wavenumber
/// axis `k` and whose leading axes are transverse spectral coordinates, onto
/// the uniform `kz_axis`. For each transverse coordinate the source samples
/// lie at `k_z(k) = sqrt(4k^2 - k_perp^2)` (evanescent points with
/// `4k^2 <= k_perp^2` are excluded); a reference phase
/// `exp(-j*k_z*z_phase)` is applied at the source points and the result is
/// linearly interpolated onto `kz_axis`, zero outside the source support.
pub fn stolt_resample<T: Scalar>(
    spec: &SpectralGrid<T>,
    kz_axis: UniformAxis<T>,
    z_phase: T,
) -> Result<SpectralGrid<T>> {
    let ndim = spec.values.ndim();
    if ndim < 1 {
        return Err(Error::DimensionMismatch("stolt input must have a k axis".into()));
    }
    let k = spec.axes[ndim - 1];
    if !(k.start > T::zero()) {
        return Err(Error::InvalidAxis("wavenumber axis must be positive".into()));
    }
    let k_vals = k.values();
    let trans_shape: Vec<usize> = spec.values.shape()[..ndim - 1].to_vec();
    let n_rows: usize = trans_shape.iter().product();
    let nk = k.len;
    let nz = kz_axis.len;

    let src = spec.values.as_standard_layout();
    let src_slice = src.as_slice().expect("standard layout");

    let zero = Complex::new(T::zero(), T::zero());
    let mut out_data = vec![zero; n_rows * nz];
    let kz_targets = kz_axis.values();
    let four = T::from_f64_lossy(4.0);
    let any_support = std::sync::atomic::AtomicBool::new(false);

    out_data
        .par_chunks_mut(nz)
        .enumerate()
        .for_each(|(row, out_row)| {
            // transverse |k_perp|^2 for this row
            let mut rem = row;
            let mut k_perp_sq = T::zero();
            for (d, &len) in trans_shape.iter().enumerate().rev() {
                let idx = rem % len;
                rem /= len;
                let coord = spec.axes[d].value(idx);
                k_perp_sq += coord * coord;
            }
            let src_row = &src_slice[row * nk..(row + 1) * nk];

            // propagating source samples, ascending in k_z
            let mut kz_src: Vec<T> = Vec::with_capacity(nk);
            let mut v_src: Vec<Complex<T>> = Vec::with_capacity(nk);
            for (j, &kj) in k_vals.iter().enumerate() {
                let disc = four * kj * kj - k_perp_sq;
                if disc > T::zero() {
                    let kz = disc.sqrt();
                    kz_src.push(kz);
                    v_src.push(src_row[j] * Complex::from_polar(T::one(), -kz * z_phase));
                }
            }
            if kz_src.len() < 2 {
                return; // row stays zero
            }
            any_support.store(true, std::sync::atomic::Ordering::Relaxed);
            let lo = kz_src[0];
            let hi = *kz_src.last().unwrap();
            for (t, &kz_t) in kz_targets.iter().enumerate() {
                if kz_t < lo || kz_t > hi {
                    continue;
                }
                let j = kz_src.partition_point(|&s| s < kz_t).min(kz_src.len() - 1).max(1);
                let (z0, z1) = (kz_src[j - 1], kz_src[j]);
                let frac = (kz_t - z0) / (z1 - z0);
                out_row[t] = v_src[j - 1] * Complex::new(T::one() - frac, T::zero())
                    + v_src[j] * Complex::new(frac, T::zero());
            }
        });

    if !any_support.load(std::sync::atomic::Ordering::Relaxed) {
        return Err(Error::EmptySupport(
            "no propagating source samples for any transverse coordinate".into(),
        ));
    }

    let mut out_shape = trans_shape;
    out_shape.push(nz);
    let values = ArrayD::from_shape_vec(out_shape, out_data).unwrap();
    let mut axes = spec.axes[..ndim - 1].to_vec();
    axes.push(kz_axis);
    SpectralGrid::new(values, axes)
}
