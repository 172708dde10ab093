//! Scalar abstraction shared by every module.

use num_complex::Complex;
use num_traits::{Float, FloatConst, NumAssign};
use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

/// Real floating-point scalar accepted by the library (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + NumAssign + Debug + Display + LowerExp + Default + Sum + Send + Sync + 'static
{
    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as num_traits::NumCast>::from(x).expect("literal out of range")
    }

    /// Converts a count or index.
    #[inline]
    fn of(n: usize) -> Self {
        <Self as num_traits::NumCast>::from(n).expect("integer out of range")
    }

    #[inline]
    fn to_f64(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub type C<T> = Complex<T>;

#[inline]
pub fn cx<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub fn re<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

#[inline]
pub fn i_unit<T: Real>() -> C<T> {
    Complex::new(T::zero(), T::one())
}
