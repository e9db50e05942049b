use crate::rng::Draws;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssignOps};
use std::fmt;
use std::iter::Sum;

/// Scalar abstraction for the numeric kernel: `f32` and `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssignOps
    + Sum<Self>
    + Draws
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
{
    /// Shorthand for lossy conversion of an `f64` constant.
    fn c(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable")
    }

    /// Conversion from a dimension/index.
    fn of(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
