//! Scalar abstraction: every numeric routine in this crate is generic over
//! the floating-point type, instantiated as `f32` or `f64`.

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

/// Floating-point scalar the whole pipeline is generic over.
///
/// `f64` is the default for fitting and all interchange JSON; `f32` matches
/// the binary interchange formats.
pub trait Real:
    RealField + Copy + Default + FromPrimitive + ToPrimitive + std::iter::Sum<Self> + 'static
{
    /// Lossy conversion from `f64`, for literals and file data.
    fn of(x: f64) -> Self;

    /// Lossy conversion to `f64`, for reporting and file data.
    fn to_f64_lossy(self) -> f64;
}

impl Real for f32 {
    fn of(x: f64) -> Self {
        x as f32
    }
    fn to_f64_lossy(self) -> f64 {
        f64::from(self)
    }
}

impl Real for f64 {
    fn of(x: f64) -> Self {
        x
    }
    fn to_f64_lossy(self) -> f64 {
        self
    }
}

/// Shorthand for `T::of(x)` at call sites with inferred `T`.
#[inline]
pub fn real<T: Real>(x: f64) -> T {
    T::of(x)
}
