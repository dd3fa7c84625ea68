//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real scalar the model is evaluated in (`f32` or `f64`).
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Relative slack applied to every feasibility comparison
    /// (`sum <= bound * (1 + tol)`).
    fn feasibility_tol() -> Self;

    /// Convergence gap for the Perron-root iteration.
    fn spectral_tol() -> Self;

    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn feasibility_tol() -> f64 {
        1e-9
    }

    fn spectral_tol() -> f64 {
        1e-10
    }
}

// f32 cannot resolve 1e-9 relative differences; its slack sits a few ulps
// above the accumulated rounding of a 60-term sum.
impl Scalar for f32 {
    fn feasibility_tol() -> f32 {
        1e-5
    }

    fn spectral_tol() -> f32 {
        1e-6
    }
}

/// `value <= bound * (1 + tol)`.
#[inline]
pub fn within<T: Scalar>(value: T, bound: T) -> bool {
    value <= bound * (T::one() + T::feasibility_tol())
}
