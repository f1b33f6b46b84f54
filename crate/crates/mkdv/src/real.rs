//! Generic scalar type for all numerical kernels.
//!
//! Everything in this crate is written against [`Real`], implemented for
//! `f32` and `f64`. The stated accuracy targets (1e-8 .. 1e-12) are only
//! reachable in `f64`; the `f32` instantiation exists for cheap smoke
//! tests and downstream experimentation.

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, Signed};
use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Signed
    + Sum
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
    + rustfft::FftNum
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Shorthand for converting an `f64` literal into the working scalar.
#[inline]
pub fn fl<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal convertible to scalar")
}
