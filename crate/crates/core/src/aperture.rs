//! Synthetic aperture geometries.
//!
//! A monostatic element is scanned over one of four trajectories:
//!
//! - `Linear`: positions `(0, y', Z0)`, imaging in the y-z plane;
//! - `Rectilinear`: positions `(x', y', Z0)`;
//! - `Circular`: positions `(R0*cos(theta), 0, R0*sin(theta))`, imaging in
//!   the x-z plane;
//! - `Cylindrical`: positions `(R0*cos(theta), y', R0*sin(theta))`.
//!
//! Element positions are uniformly spaced along each scan dimension, which
//! every FFT-based reconstruction requires. Uniformity is guaranteed by
//! construction through [`UniformAxis`].

use crate::axis::UniformAxis;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometry {
    Linear,
    Rectilinear,
    Circular,
    Cylindrical,
}

impl Geometry {
    pub fn name(self) -> &'static str {
        match self {
            Geometry::Linear => "linear",
            Geometry::Rectilinear => "rectilinear",
            Geometry::Circular => "circular",
            Geometry::Cylindrical => "cylindrical",
        }
    }
}

/// Element positions of a synthetic array.
#[derive(Debug, Clone, PartialEq)]
pub enum Aperture<T> {
    /// Elements at `(0, y, Z0)`.
    Linear { y: UniformAxis<T>, standoff: T },
    /// Elements at `(x, y, Z0)`.
    Rectilinear {
        x: UniformAxis<T>,
        y: UniformAxis<T>,
        standoff: T,
    },
    /// Elements at `(R0*cos(theta), 0, R0*sin(theta))`, angles in radians.
    Circular { theta: UniformAxis<T>, radius: T },
    /// Elements at `(R0*cos(theta), y, R0*sin(theta))`.
    Cylindrical {
        theta: UniformAxis<T>,
        y: UniformAxis<T>,
        radius: T,
    },
}

impl<T: Scalar> Aperture<T> {
    pub fn linear(y: UniformAxis<T>, standoff: T) -> Result<Self> {
        if !standoff.is_finite() {
            return Err(Error::InvalidAperture("standoff must be finite".into()));
        }
        Ok(Aperture::Linear { y, standoff })
    }

    pub fn rectilinear(x: UniformAxis<T>, y: UniformAxis<T>, standoff: T) -> Result<Self> {
        if !standoff.is_finite() {
            return Err(Error::InvalidAperture("standoff must be finite".into()));
        }
        Ok(Aperture::Rectilinear { x, y, standoff })
    }

    pub fn circular(theta: UniformAxis<T>, radius: T) -> Result<Self> {
        if !(radius > T::zero()) {
            return Err(Error::InvalidAperture("circular radius must be positive".into()));
        }
        Ok(Aperture::Circular { theta, radius })
    }

    pub fn cylindrical(theta: UniformAxis<T>, y: UniformAxis<T>, radius: T) -> Result<Self> {
        if !(radius > T::zero()) {
            return Err(Error::InvalidAperture("cylindrical radius must be positive".into()));
        }
        Ok(Aperture::Cylindrical { theta, y, radius })
    }

    pub fn geometry(&self) -> Geometry {
        match self {
            Aperture::Linear { .. } => Geometry::Linear,
            Aperture::Rectilinear { .. } => Geometry::Rectilinear,
            Aperture::Circular { .. } => Geometry::Circular,
            Aperture::Cylindrical { .. } => Geometry::Cylindrical,
        }
    }

    /// Shape of the element grid, matching the leading dimensions of a
    /// [`crate::BeatCube`] built over this aperture.
    pub fn grid_shape(&self) -> Vec<usize> {
        match self {
            Aperture::Linear { y, .. } => vec![y.len],
            Aperture::Rectilinear { x, y, .. } => vec![x.len, y.len],
            Aperture::Circular { theta, .. } => vec![theta.len],
            Aperture::Cylindrical { theta, y, .. } => vec![theta.len, y.len],
        }
    }

    pub fn num_elements(&self) -> usize {
        self.grid_shape().iter().product()
    }

    /// Cartesian position of the element at flat index `i` (row-major over
    /// [`Self::grid_shape`]).
    pub fn element_position(&self, i: usize) -> [T; 3] {
        match self {
            Aperture::Linear { y, standoff } => [T::zero(), y.value(i), *standoff],
            Aperture::Rectilinear { x, y, standoff } => {
                let (ix, iy) = (i / y.len, i % y.len);
                [x.value(ix), y.value(iy), *standoff]
            }
            Aperture::Circular { theta, radius } => {
                let t = theta.value(i);
                [*radius * t.cos(), T::zero(), *radius * t.sin()]
            }
            Aperture::Cylindrical { theta, y, radius } => {
                let (it, iy) = (i / y.len, i % y.len);
                let t = theta.value(it);
                [*radius * t.cos(), y.value(iy), *radius * t.sin()]
            }
        }
    }

    pub fn element_positions(&self) -> impl Iterator<Item = [T; 3]> + '_ {
        (0..self.num_elements()).map(move |i| self.element_position(i))
    }

    /// Rectilinear aperture translated by `dx` along x (dual-radar layout).
    pub fn shifted_x(&self, dx: T) -> Result<Self> {
        match self {
            Aperture::Rectilinear { x, y, standoff } => Ok(Aperture::Rectilinear {
                x: UniformAxis { start: x.start + dx, ..*x },
                y: *y,
                standoff: *standoff,
            }),
            _ => Err(Error::GeometryMismatch {
                algorithm: "shifted_x",
                found: self.geometry().name(),
            }),
        }
    }
}
