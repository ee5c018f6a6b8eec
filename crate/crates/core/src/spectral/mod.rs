//! Shared spectral machinery: spatial Fourier transforms, the shift identity,
//! Stolt interpolation onto uniform dispersion grids, polar-format
//! regridding, and a numerical check of the stationary-phase plane-wave
//! decomposition.

mod fft;
mod msp;
mod polar;
mod stolt;

pub use msp::msp_check_linear;
pub use polar::{polar_regrid_2d, polar_regrid_cylindrical};
pub use stolt::stolt_resample;

pub(crate) use fft::{next_pow2, zero_pad_axis};

use ndarray::ArrayD;
use num_complex::Complex;

use crate::axis::UniformAxis;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A complex N-D grid with one uniform spectral (or spatial) coordinate axis
/// per dimension.
#[derive(Debug, Clone)]
pub struct SpectralGrid<T> {
    pub values: ArrayD<Complex<T>>,
    pub axes: Vec<UniformAxis<T>>,
}

impl<T: Scalar> SpectralGrid<T> {
    pub fn new(values: ArrayD<Complex<T>>, axes: Vec<UniformAxis<T>>) -> Result<Self> {
        let shape: Vec<usize> = axes.iter().map(|a| a.len).collect();
        if values.shape() != shape.as_slice() {
            return Err(Error::DimensionMismatch(format!(
                "grid shape {:?} does not match axes {:?}",
                values.shape(),
                shape
            )));
        }
        Ok(Self { values, axes })
    }
}

/// Forward spatial Fourier transform over the dimensions in `dims`
/// (convention `exp(-j*k*u)`, unitary, zero-centered spectral axes). Axes of
/// untransformed dimensions are carried through unchanged.
pub fn ft_nd<T: Scalar>(
    values: &ArrayD<Complex<T>>,
    axes: &[UniformAxis<T>],
    dims: &[usize],
) -> Result<SpectralGrid<T>> {
    check_dims(values, axes, dims)?;
    let mut out = values.clone();
    let mut out_axes = axes.to_vec();
    for &d in dims {
        out_axes[d] = fft::ft_axis(&mut out, d, &axes[d]);
    }
    SpectralGrid::new(out, out_axes)
}

/// Inverse spatial Fourier transform (`exp(+j*k*u)`) over `dims`. The output
/// spatial axis of dimension `d` is centered on `out_centers[i]` for the
/// `i`-th entry of `dims`.
pub fn ift_nd<T: Scalar>(
    grid: &SpectralGrid<T>,
    dims: &[usize],
    out_centers: &[T],
) -> Result<(ArrayD<Complex<T>>, Vec<UniformAxis<T>>)> {
    check_dims(&grid.values, &grid.axes, dims)?;
    if dims.len() != out_centers.len() {
        return Err(Error::DimensionMismatch(
            "one output center required per transformed dimension".into(),
        ));
    }
    let mut out = grid.values.clone();
    let mut out_axes = grid.axes.clone();
    for (&d, &c) in dims.iter().zip(out_centers) {
        out_axes[d] = fft::ift_axis(&mut out, d, &grid.axes[d], c);
    }
    Ok((out, out_axes))
}

/// Applies the spatial-shift phase `exp(-j * sum_d k_d * offset_d)` to a
/// spectral grid; shifting by `offsets` in space multiplies the spectrum by
/// exactly this factor.
pub fn spatial_shift_phase<T: Scalar>(grid: &SpectralGrid<T>, offsets: &[T]) -> Result<SpectralGrid<T>> {
    if offsets.len() != grid.axes.len() {
        return Err(Error::DimensionMismatch(
            "one offset required per grid dimension".into(),
        ));
    }
    let mut out = grid.values.clone();
    for (idx, v) in out.indexed_iter_mut() {
        let mut phase = T::zero();
        for (d, &off) in offsets.iter().enumerate() {
            if off != T::zero() {
                phase -= grid.axes[d].value(idx[d]) * off;
            }
        }
        if phase != T::zero() {
            *v = *v * Complex::from_polar(T::one(), phase);
        }
    }
    SpectralGrid::new(out, grid.axes.clone())
}

fn check_dims<T: Scalar>(
    values: &ArrayD<Complex<T>>,
    axes: &[UniformAxis<T>],
    dims: &[usize],
) -> Result<()> {
    if axes.len() != values.ndim() {
        return Err(Error::DimensionMismatch("one axis required per dimension".into()));
    }
    for (d, ax) in axes.iter().enumerate() {
        if ax.len != values.shape()[d] {
            return Err(Error::DimensionMismatch(format!(
                "axis {d} length {} does not match grid dimension {}",
                ax.len,
                values.shape()[d]
            )));
        }
    }
    for &d in dims {
        if d >= values.ndim() {
            return Err(Error::DimensionMismatch(format!("dimension {d} out of range")));
        }
    }
    Ok(())
}
