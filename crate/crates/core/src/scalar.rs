//! Floating-point scalar abstraction for the amplitude kernels.

use num_traits::{Float, FloatConst, NumAssign, NumCast, ToPrimitive};
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Real scalar type backing complex amplitudes (`f32` or `f64` in practice).
pub trait Scalar:
    Float + FloatConst + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Conversion from `f64`; panics only for types that cannot represent
    /// ordinary finite constants.
    fn from_f64(x: f64) -> Self {
        <Self as NumCast>::from(x).expect("finite f64 constant must convert")
    }

    /// Widening conversion used when reporting probabilities and norms.
    fn as_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
