//! Scalar abstraction shared by every amplitude-carrying type.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point type usable as the real part of an amplitude: `f32` or `f64`.
///
/// The associated constants are the default tolerances for that precision.
pub trait Real:
    Float + FloatConst + NumAssign + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    const EPS_NORM: f64;
    const EPS_UNITARY: f64;
    const EPS_DROP: f64;

    /// Converts a literal. Every `f64` is representable (possibly rounded) in both impls.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite real converts to f64")
    }
}

impl Real for f64 {
    const EPS_NORM: f64 = 1e-9;
    const EPS_UNITARY: f64 = 1e-9;
    const EPS_DROP: f64 = 1e-14;
}

impl Real for f32 {
    const EPS_NORM: f64 = 1e-5;
    const EPS_UNITARY: f64 = 1e-5;
    const EPS_DROP: f64 = 1e-12;
}
