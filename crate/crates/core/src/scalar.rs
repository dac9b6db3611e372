//! Scalar types the simulator is generic over.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar backing quaternion components and probabilities.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Tolerance used when validating invariants (normalization, unitarity,
    /// non-signalling) on values produced by this type.
    fn validation_tolerance() -> Self;

    /// Threshold below which a j or k component is treated as absent when
    /// detecting the complex subalgebra.
    fn complex_tolerance() -> Self;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable in scalar type")
    }
}

impl Real for f64 {
    #[inline]
    fn validation_tolerance() -> Self {
        1e-10
    }

    #[inline]
    fn complex_tolerance() -> Self {
        1e-14
    }
}

impl Real for f32 {
    #[inline]
    fn validation_tolerance() -> Self {
        1e-5
    }

    #[inline]
    fn complex_tolerance() -> Self {
        1e-6
    }
}
