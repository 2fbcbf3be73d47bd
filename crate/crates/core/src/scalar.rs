//! Scalar abstraction for the real-valued parts of the library.
//!
//! Graph structure is integral throughout. Expansion rates, potentials and
//! vertex weights are real and are written against [`Real`] so they can be
//! evaluated in `f32` or `f64`.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating point type usable for expansion rates and weights.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Comparison slack for thresholds that cannot be compared exactly.
    fn tolerance() -> Self;

    fn count(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("usize fits in a float")
    }

    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 literal fits")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `self >= other`, allowing for [`Real::tolerance`].
    fn at_least(self, other: Self) -> bool {
        self >= other - Self::tolerance()
    }
}

impl Real for f32 {
    fn tolerance() -> Self {
        1e-5
    }
}

impl Real for f64 {
    fn tolerance() -> Self {
        1e-9
    }
}
