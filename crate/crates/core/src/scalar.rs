//! Scalar abstraction: the whole toolkit is generic over the floating-point
//! type used for positions, wavenumbers, and complex samples.

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar usable throughout the toolkit: `f32` or `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + rustfft::FftNum
    + std::iter::Sum
    + std::fmt::Display
    + Send
    + Sync
    + 'static
{
    /// Speed of light in vacuum (m/s), exact by definition.
    fn speed_of_light() -> Self {
        Self::from_f64(crate::SPEED_OF_LIGHT).unwrap()
    }

    /// Lossy conversion from `f64`, for constants and boundary values.
    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).unwrap()
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap()
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
