//! Floating-point abstraction for the solver stack.
//!
//! Everything downstream is written against [`Scalar`] so the same code runs
//! at f32 and f64. The crate root exports f64 aliases for the common case.

use std::fmt::{Debug, Display, LowerExp};
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::{de::DeserializeOwned, Serialize};

pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Debug
    + Display
    + LowerExp
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an f64 constant. Literals in generic code go
    /// through here; the f32 instantiation rounds.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 constant convertible to scalar")
    }

    /// Lossy view as f64, used for diagnostics and error payloads.
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn of_round_trips_f64() {
        assert_eq!(f64::of(0.1), 0.1);
        assert_eq!(0.25f64.as_f64(), 0.25);
    }

    #[test]
    fn of_rounds_for_f32() {
        assert_eq!(f32::of(0.5), 0.5f32);
        assert!((f32::of(0.1) - 0.1f32).abs() < 1e-7);
    }
}
