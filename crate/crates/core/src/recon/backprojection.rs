//! Brute-force matched-filter backprojection.
//!
//! Evaluates `p(v) = sum_e sum_k s(e, k) * exp(-j*2k*R(e, v))` directly per
//! voxel, with no path-loss weighting, no interpolation, and no
//! approximation beyond the voxel grid itself. Quadratic cost, used as the
//! reference the Fourier-domain algorithms are checked against.

use ndarray::ArrayD;
use num_complex::Complex;
use rayon::prelude::*;

use crate::cube::BeatCube;
use crate::error::{Error, Result};
use crate::image::ImageVolume;
use crate::scalar::Scalar;
use crate::scene::distance;

use super::ReconGrid;

/// Backprojects a beat cube onto `grid`. The grid-to-world mapping follows
/// [`ReconGrid::voxel_position`] for the cube's aperture geometry. This is
/// the adjoint of the unit-amplitude forward model.
pub fn backprojection<T: Scalar>(cube: &BeatCube<T>, grid: &ReconGrid<T>) -> Result<ImageVolume<T>> {
    let geometry = cube.aperture.geometry();
    // validate the geometry/grid pairing before the hot loop
    grid.voxel_position(geometry, &vec![0; grid.ndim()])?;

    let elems: Vec<[T; 3]> = cube.aperture.element_positions().collect();
    let nk = cube.k.len;
    let k0 = cube.k.start;
    let dk = cube.k.step;
    let two = T::from_f64_lossy(2.0);
    let samples = cube.samples.as_standard_layout();
    let s = samples.as_slice().expect("standard layout");

    let shape = grid.shape();
    let ndim = shape.len();
    let n_vox: usize = shape.iter().product();
    let zero = Complex::new(T::zero(), T::zero());
    let mut out = vec![zero; n_vox];
    let hit_zero_range = std::sync::atomic::AtomicBool::new(false);

    out.par_iter_mut().enumerate().for_each(|(v, slot)| {
        let mut rem = v;
        let mut idx = vec![0usize; ndim];
        for d in (0..ndim).rev() {
            idx[d] = rem % shape[d];
            rem /= shape[d];
        }
        let pos = grid.voxel_position(geometry, &idx).expect("validated above");
        let mut acc = zero;
        for (e, ep) in elems.iter().enumerate() {
            let r = distance(ep, &pos);
            if r == T::zero() {
                hit_zero_range.store(true, std::sync::atomic::Ordering::Relaxed);
                return;
            }
            // exp(-j*2k*R) along the band via phase recurrence
            let two_r = two * r;
            let mut ph = Complex::from_polar(T::one(), -k0 * two_r);
            let rot = Complex::from_polar(T::one(), -dk * two_r);
            for &sample in &s[e * nk..(e + 1) * nk] {
                acc += sample * ph;
                ph = ph * rot;
            }
        }
        *slot = acc;
    });

    if hit_zero_range.load(std::sync::atomic::Ordering::Relaxed) {
        return Err(Error::ZeroRange);
    }
    let values = ArrayD::from_shape_vec(shape, out).unwrap();
    ImageVolume::new(values, grid.axes.clone())
}
