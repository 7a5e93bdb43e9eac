//! Scalar abstraction: everything numeric is generic over a real field.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use std::fmt::{Debug, Display};

/// Real scalar the whole crate is generic over. `f64` is the working
/// precision; `f32` compiles and is useful for quick experiments, but the
/// documented tolerances assume double precision.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Send + Sync + 'static
{
}

/// Convert an `f64` constant into the working scalar type.
#[inline]
pub fn from_f64<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant not representable in scalar type")
}

/// Convert a working scalar back to `f64` (for reports and error messages).
#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Complex number over the working scalar.
pub type C<T> = Complex<T>;

#[inline]
pub fn c64<T: Real>(re: f64, im: f64) -> C<T> {
    Complex::new(from_f64(re), from_f64(im))
}
