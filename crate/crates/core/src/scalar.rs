use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real scalar the laboratory computes over: `f32` or `f64`.
///
/// Tolerances throughout the crate are stated in `f64` and converted with
/// [`Scalar::lit`]; the published tolerances (1e-12 for closed identities)
/// are only meaningful for `f64`.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + Default
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into this scalar type.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }

    fn half() -> Self {
        Self::lit(0.5)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Tolerance for identities that are exact up to rounding.
pub const TOL_EXACT: f64 = 1e-12;
/// Tolerance for accumulated finite sums and closed-form values.
pub const TOL_SUM: f64 = 1e-9;
/// Tolerance for optimization-based verdicts.
pub const TOL_OPT: f64 = 1e-6;
