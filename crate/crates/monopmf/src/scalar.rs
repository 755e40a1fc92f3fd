//! Scalar abstraction for the probability arithmetic.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Real: Float + FromPrimitive + Sum + Debug + Display + Send + Sync + 'static {}

impl<T> Real for T where T: Float + FromPrimitive + Sum + Debug + Display + Send + Sync + 'static {}

/// Lift an `f64` constant into the scalar type.
pub(crate) fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("constant representable in scalar type")
}

/// Absolute tolerance for sum-to-one and flatness checks. 1e-12 for `f64`,
/// widened for scalar types whose epsilon is coarser than that.
pub(crate) fn unit_tol<T: Real>() -> T {
    real::<T>(1e-12).max(T::epsilon() * real::<T>(32.0))
}
