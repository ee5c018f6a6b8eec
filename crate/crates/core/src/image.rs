//! Reconstructed reflectivity images on rectangular voxel grids.

use ndarray::{ArrayD, Dimension};
use num_complex::Complex;

use crate::axis::UniformAxis;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Complex reflectivity on a 1-D, 2-D, or 3-D voxel grid. `axes[d]` holds the
/// voxel center coordinates of dimension `d` in meters.
#[derive(Debug, Clone)]
pub struct ImageVolume<T> {
    pub values: ArrayD<Complex<T>>,
    pub axes: Vec<UniformAxis<T>>,
}

impl<T: Scalar> ImageVolume<T> {
    pub fn new(values: ArrayD<Complex<T>>, axes: Vec<UniformAxis<T>>) -> Result<Self> {
        let shape: Vec<usize> = axes.iter().map(|a| a.len).collect();
        if values.shape() != shape.as_slice() {
            return Err(Error::DimensionMismatch(format!(
                "image shape {:?} does not match axes {:?}",
                values.shape(),
                shape
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::DimensionMismatch("image contains NaN/Inf values".into()));
        }
        Ok(Self { values, axes })
    }

    pub fn ndim(&self) -> usize {
        self.axes.len()
    }

    pub fn magnitude(&self) -> ArrayD<T> {
        self.values.mapv(|v| v.norm())
    }

    /// Multi-index and coordinates of the voxel with the largest magnitude.
    pub fn peak(&self) -> (Vec<usize>, Vec<T>) {
        let mut best = T::neg_infinity();
        let mut best_idx = vec![0; self.ndim()];
        for (idx, v) in self.values.indexed_iter() {
            let m = v.norm();
            if m > best {
                best = m;
                best_idx = idx.slice().to_vec();
            }
        }
        let coords = best_idx
            .iter()
            .zip(&self.axes)
            .map(|(&i, ax)| ax.value(i))
            .collect();
        (best_idx, coords)
    }

    /// Local maxima of the magnitude above `threshold * global_max`, sorted
    /// by descending magnitude. A voxel is a local maximum if it is at least
    /// as large as every axis-adjacent neighbor.
    pub fn find_peaks(&self, threshold: T) -> Vec<Peak<T>> {
        let mag = self.magnitude();
        let global = mag.iter().cloned().fold(T::zero(), T::max);
        let cut = threshold * global;
        let shape: Vec<usize> = mag.shape().to_vec();
        let mut peaks = Vec::new();
        'voxel: for (idx, &m) in mag.indexed_iter() {
            if m < cut || m <= T::zero() {
                continue;
            }
            let idx = idx.slice().to_vec();
            for d in 0..shape.len() {
                let mut lo = idx.clone();
                let mut hi = idx.clone();
                if idx[d] > 0 {
                    lo[d] -= 1;
                    if mag[lo.as_slice()] > m {
                        continue 'voxel;
                    }
                }
                if idx[d] + 1 < shape[d] {
                    hi[d] += 1;
                    if mag[hi.as_slice()] > m {
                        continue 'voxel;
                    }
                }
            }
            let coords = idx.iter().zip(&self.axes).map(|(&i, ax)| ax.value(i)).collect();
            peaks.push(Peak { index: idx, coords, magnitude: m });
        }
        peaks.sort_by(|a, b| b.magnitude.partial_cmp(&a.magnitude).unwrap());
        // Plateaus (equal-valued neighbors) produce duplicate local maxima;
        // keep only peaks that are not axis-adjacent to a stronger kept one.
        let mut kept: Vec<Peak<T>> = Vec::new();
        for p in peaks {
            let adjacent = kept.iter().any(|q| {
                p.index
                    .iter()
                    .zip(&q.index)
                    .map(|(&a, &b)| a.abs_diff(b))
                    .sum::<usize>()
                    <= 1
            });
            if !adjacent {
                kept.push(p);
            }
        }
        kept
    }
}

#[derive(Debug, Clone)]
pub struct Peak<T> {
    pub index: Vec<usize>,
    pub coords: Vec<T>,
    pub magnitude: T,
}

/// Normalized cross-correlation (zero lag) between the magnitudes of two
/// images on the same grid. Returns a value in [0, 1].
pub fn magnitude_correlation<T: Scalar>(a: &ImageVolume<T>, b: &ImageVolume<T>) -> Result<T> {
    if a.values.shape() != b.values.shape() {
        return Err(Error::DimensionMismatch("images have different shapes".into()));
    }
    let mut dot = T::zero();
    let mut na = T::zero();
    let mut nb = T::zero();
    for (x, y) in a.values.iter().zip(b.values.iter()) {
        let mx = x.norm();
        let my = y.norm();
        dot += mx * my;
        na += mx * mx;
        nb += my * my;
    }
    if na == T::zero() || nb == T::zero() {
        return Ok(T::zero());
    }
    Ok(dot / (na.sqrt() * nb.sqrt()))
}
