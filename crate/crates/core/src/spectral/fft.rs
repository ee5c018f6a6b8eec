//! Per-axis discrete spatial Fourier transforms with physical coordinates.
//!
//! Forward transform of samples `x_n` at positions `u_n = u0 + n*du`:
//!
//! ```text
//! S_m = (1/sqrt(N)) * sum_n x_n * exp(-j * k_m * u_n),
//! k_m = (m - floor(N/2)) * dk,   dk = 2*pi/(N*du)
//! ```
//!
//! The inverse mirrors it with `exp(+j*k*u)`. Both are realized as a unitary
//! FFT wrapped in unit-modulus twiddles that account for the axis offsets, so
//! the pair is exactly unitary: round trips and Parseval hold to rounding.
//! The spectral axis is zero-centered (bin `floor(N/2)` is DC).

use ndarray::{ArrayD, Axis};
use num_complex::Complex;
use rustfft::FftPlanner;

use crate::axis::UniformAxis;
use crate::scalar::Scalar;

/// Forward spatial FT along `axis`. Returns the zero-centered spectral axis.
pub(crate) fn ft_axis<T: Scalar>(
    values: &mut ArrayD<Complex<T>>,
    axis: usize,
    u: &UniformAxis<T>,
) -> UniformAxis<T> {
    let n = u.len;
    debug_assert_eq!(values.shape()[axis], n);
    let k = u.conjugate_spectral();
    let c = n / 2;
    let tau = T::TAU();
    let nf = T::from_usize(n).unwrap();
    let scale = T::one() / nf.sqrt();

    // pre-twiddle rotates DC to the centered bin, post-twiddle accounts for
    // the axis origin u0.
    let pre: Vec<Complex<T>> = (0..n)
        .map(|i| {
            let ph = tau * T::from_usize(c).unwrap() * T::from_usize(i).unwrap() / nf;
            Complex::from_polar(T::one(), ph)
        })
        .collect();
    let post: Vec<Complex<T>> = (0..n)
        .map(|m| Complex::from_polar(scale, -k.value(m) * u.start))
        .collect();

    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    let mut scratch = vec![Complex::new(T::zero(), T::zero()); n];
    for mut lane in values.lanes_mut(Axis(axis)) {
        for (i, s) in scratch.iter_mut().enumerate() {
            *s = lane[i] * pre[i];
        }
        fft.process(&mut scratch);
        for (m, s) in scratch.iter().enumerate() {
            lane[m] = *s * post[m];
        }
    }
    k
}

/// Inverse spatial FT along `axis`. `k` is the spectral axis of that
/// dimension (any origin); the output spatial axis is centered on
/// `out_center` with spacing `2*pi/(N*dk)`.
pub(crate) fn ift_axis<T: Scalar>(
    values: &mut ArrayD<Complex<T>>,
    axis: usize,
    k: &UniformAxis<T>,
    out_center: T,
) -> UniformAxis<T> {
    let n = k.len;
    debug_assert_eq!(values.shape()[axis], n);
    let nf = T::from_usize(n).unwrap();
    let du = T::TAU() / (nf * k.step);
    let c = n / 2;
    let u = UniformAxis {
        start: out_center - T::from_usize(c).unwrap() * du,
        step: du,
        len: n,
    };
    let tau = T::TAU();
    let scale = T::one() / nf.sqrt();

    let pre: Vec<Complex<T>> = (0..n)
        .map(|m| {
            let mf = T::from_usize(m).unwrap();
            let ph = mf * k.step * out_center - tau * mf * T::from_usize(c).unwrap() / nf;
            Complex::from_polar(T::one(), ph)
        })
        .collect();
    let post: Vec<Complex<T>> = (0..n)
        .map(|i| Complex::from_polar(scale, k.start * u.value(i)))
        .collect();

    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_inverse(n);
    let mut scratch = vec![Complex::new(T::zero(), T::zero()); n];
    for mut lane in values.lanes_mut(Axis(axis)) {
        for (m, s) in scratch.iter_mut().enumerate() {
            *s = lane[m] * pre[m];
        }
        fft.process(&mut scratch);
        for (i, s) in scratch.iter().enumerate() {
            lane[i] = *s * post[i];
        }
    }
    u
}

/// Extends `values` along `axis` with zeros to `new_len` (axis keeps its
/// start and step; padded positions carry zero signal).
pub(crate) fn zero_pad_axis<T: Scalar>(
    values: &ArrayD<Complex<T>>,
    axis: usize,
    u: &UniformAxis<T>,
    new_len: usize,
) -> (ArrayD<Complex<T>>, UniformAxis<T>) {
    assert!(new_len >= u.len);
    let mut shape = values.shape().to_vec();
    shape[axis] = new_len;
    let mut out = ArrayD::from_elem(shape, Complex::new(T::zero(), T::zero()));
    out.slice_axis_mut(Axis(axis), ndarray::Slice::from(0..u.len))
        .assign(values);
    (out, UniformAxis { start: u.start, step: u.step, len: new_len })
}

pub(crate) fn next_pow2(n: usize) -> usize {
    n.max(2).next_power_of_two()
}
