//! Floating-point scalar abstraction.
//!
//! The whole crate is generic over the real scalar type so the same code runs
//! in `f32` and `f64`. Tolerances in the spec-level checks assume `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real scalar usable throughout the crate: IEEE float with constants and
/// primitive conversions.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Shorthand for converting an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal not representable in scalar type")
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn half() -> Self {
        Self::one() / Self::two()
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
