//! Numerical check of the stationary-phase plane-wave decomposition of a
//! spherical wavefront over a linear aperture:
//!
//! ```text
//! exp(j*r*sqrt((x-u)^2 + w^2))  ~  int exp(j*k_u*(u-x) + j*k_w*w) dk_u,
//! k_w = sqrt(r^2 - k_u^2)
//! ```
//!
//! Both sides are evaluated on a dense `u` grid and compared by normalized
//! inner product; amplitude factors are dropped on both sides, so fidelity
//! is measured on normalized profiles.

use num_complex::Complex;

use crate::axis::UniformAxis;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Returns the magnitude of the normalized complex inner product between the
/// spherical-wavefront profile and its plane-wave decomposition, in [0, 1].
///
/// `r` is the two-way wavenumber (2k), `w` the standoff distance, `x` the
/// target coordinate. `u_axis` must resolve the fastest phase variation:
/// `r * du < pi`.
pub fn msp_check_linear<T: Scalar>(
    r: T,
    w: T,
    x: T,
    u_axis: &UniformAxis<T>,
    ku_axis: &UniformAxis<T>,
) -> Result<T> {
    if !(r > T::zero()) {
        return Err(Error::Undersampled("two-way wavenumber r must be positive".into()));
    }
    if !(w > T::zero()) {
        return Err(Error::Undersampled("standoff w must be positive".into()));
    }
    // |d(phase)/du| <= r, so r*du < pi guarantees Nyquist sampling
    if r * u_axis.step >= T::PI() {
        return Err(Error::Undersampled(format!(
            "u spacing {} too coarse for r = {} (need r*du < pi)",
            u_axis.step, r
        )));
    }

    let n = u_axis.len;
    let mut lhs = Vec::with_capacity(n);
    let mut rhs = Vec::with_capacity(n);
    let dku = ku_axis.step;
    let propagating: Vec<(T, T)> = ku_axis
        .iter()
        .filter(|&ku| ku * ku < r * r)
        .map(|ku| (ku, (r * r - ku * ku).sqrt()))
        .collect();
    if propagating.is_empty() {
        return Err(Error::EmptySupport("no propagating k_u samples".into()));
    }
    for u in u_axis.iter() {
        let du = u - x;
        lhs.push(Complex::from_polar(T::one(), r * (du * du + w * w).sqrt()));
        let mut acc = Complex::new(T::zero(), T::zero());
        for &(ku, kw) in &propagating {
            acc += Complex::from_polar(T::one(), ku * du + kw * w);
        }
        rhs.push(acc * Complex::new(dku, T::zero()));
    }

    let mut dot = Complex::new(T::zero(), T::zero());
    let mut nl = T::zero();
    let mut nr = T::zero();
    for (l, r_) in lhs.iter().zip(rhs.iter()) {
        dot += l * r_.conj();
        nl += l.norm_sqr();
        nr += r_.norm_sqr();
    }
    Ok(dot.norm() / (nl.sqrt() * nr.sqrt()))
}
