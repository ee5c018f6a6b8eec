//! Polar-format regridding: bilinear interpolation of polar spectral samples
//! `P(alpha, k_r)` onto a rectangular `(k_x, k_z)` spectral grid, with
//! `alpha = atan2(k_z, k_x)` and `k_r = sqrt(k_x^2 + k_z^2)`.

use ndarray::{Array2, Array3, ArrayView2, ArrayView3};
use num_complex::Complex;
use rayon::prelude::*;

use crate::axis::UniformAxis;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Regrids polar samples `values[(theta index, k_r index)]` onto the
/// rectangular target `(k_x, k_z)`. The radial axis `kr` must be strictly
/// increasing and positive but need not be uniform. Target points outside
/// the radial or angular support map to zero. A theta axis spanning a full
/// circle is treated as periodic.
pub fn polar_regrid_2d<T: Scalar>(
    theta: &UniformAxis<T>,
    kr: &[T],
    values: ArrayView2<'_, Complex<T>>,
    kx: &UniformAxis<T>,
    kz: &UniformAxis<T>,
) -> Result<Array2<Complex<T>>> {
    if values.shape() != [theta.len, kr.len()] {
        return Err(Error::DimensionMismatch(format!(
            "polar samples {:?} do not match theta x kr = [{}, {}]",
            values.shape(),
            theta.len,
            kr.len()
        )));
    }
    if kr.len() < 2 || !(kr[0] > T::zero()) || kr.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidAxis("k_r samples must be positive and strictly increasing".into()));
    }

    let tau = T::TAU();
    let n_t = theta.len;
    let full_circle = {
        let covered = T::from_usize(n_t).unwrap() * theta.step;
        ((covered - tau) / tau).abs() < T::from_f64_lossy(1e-6)
    };
    let theta_span = T::from_usize(n_t - 1).unwrap() * theta.step;
    let kr_lo = kr[0];
    let kr_hi = *kr.last().unwrap();
    let zero = Complex::new(T::zero(), T::zero());

    let mut out = Array2::from_elem((kx.len, kz.len), zero);
    let kz_vals = kz.values();
    out.outer_iter_mut()
        .into_par_iter()
        .enumerate()
        .for_each(|(ix, mut row)| {
            let kx_v = kx.value(ix);
            for (iz, &kz_v) in kz_vals.iter().enumerate() {
                let kr_t = (kx_v * kx_v + kz_v * kz_v).sqrt();
                if kr_t < kr_lo || kr_t > kr_hi {
                    continue;
                }
                // angle into the aperture's theta window, modulo 2*pi
                let alpha = kz_v.atan2(kx_v);
                let mut rel = (alpha - theta.start) % tau;
                if rel < T::zero() {
                    rel += tau;
                }
                let (it0, it1, ft) = if full_circle {
                    let pos = rel / theta.step;
                    let i0 = pos.floor().to_usize().unwrap_or(0).min(n_t - 1);
                    ((i0) % n_t, (i0 + 1) % n_t, pos - pos.floor())
                } else {
                    if rel > theta_span {
                        continue;
                    }
                    let pos = rel / theta.step;
                    let i0 = pos.floor().to_usize().unwrap_or(0).min(n_t.saturating_sub(2));
                    (i0, i0 + 1, pos - T::from_usize(i0).unwrap())
                };
                // radial segment (binary search handles non-uniform kr)
                let j = kr.partition_point(|&s| s < kr_t).min(kr.len() - 1).max(1);
                let (r0, r1) = (kr[j - 1], kr[j]);
                let fr = (kr_t - r0) / (r1 - r0);
                let one = T::one();
                let v = values[[it0, j - 1]] * Complex::new((one - ft) * (one - fr), T::zero())
                    + values[[it1, j - 1]] * Complex::new(ft * (one - fr), T::zero())
                    + values[[it0, j]] * Complex::new((one - ft) * fr, T::zero())
                    + values[[it1, j]] * Complex::new(ft * fr, T::zero());
                row[iz] = v;
            }
        });
    Ok(out)
}

/// Cylindrical variant: regrids `values[(theta, k_y, k)]` slice by slice.
/// For each `k_y` the radial coordinate is `k_r(k) = sqrt(4k^2 - k_y^2)`;
/// evanescent samples (`4k^2 <= k_y^2`) are dropped, and fully evanescent
/// `k_y` slices come out zero. Output is indexed `(k_x, k_y, k_z)`.
pub fn polar_regrid_cylindrical<T: Scalar>(
    theta: &UniformAxis<T>,
    ky: &UniformAxis<T>,
    k: &UniformAxis<T>,
    values: ArrayView3<'_, Complex<T>>,
    kx: &UniformAxis<T>,
    kz: &UniformAxis<T>,
) -> Result<Array3<Complex<T>>> {
    if values.shape() != [theta.len, ky.len, k.len] {
        return Err(Error::DimensionMismatch(
            "cylindrical polar samples do not match (theta, k_y, k) axes".into(),
        ));
    }
    let four = T::from_f64_lossy(4.0);
    let zero = Complex::new(T::zero(), T::zero());
    let mut out = Array3::from_elem((kx.len, ky.len, kz.len), zero);
    for iy in 0..ky.len {
        let ky_v = ky.value(iy);
        let mut kr: Vec<T> = Vec::with_capacity(k.len);
        let mut cols: Vec<usize> = Vec::with_capacity(k.len);
        for j in 0..k.len {
            let kj = k.value(j);
            let disc = four * kj * kj - ky_v * ky_v;
            if disc > T::zero() {
                kr.push(disc.sqrt());
                cols.push(j);
            }
        }
        if kr.len() < 2 {
            continue;
        }
        let mut slice = Array2::from_elem((theta.len, kr.len()), zero);
        for it in 0..theta.len {
            for (c, &j) in cols.iter().enumerate() {
                slice[[it, c]] = values[[it, iy, j]];
            }
        }
        let plane = polar_regrid_2d(theta, &kr, slice.view(), kx, kz)?;
        out.slice_mut(ndarray::s![.., iy, ..]).assign(&plane);
    }
    Ok(out)
}
