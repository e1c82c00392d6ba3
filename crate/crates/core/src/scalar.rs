//! Scalar abstraction over the floating-point element type.
//!
//! Every numeric structure in this crate (datasets, networks, metric
//! reports) is generic over a [`Scalar`], so the same pipeline runs in
//! `f32` or `f64`. Concrete `f64` aliases live at the crate root.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};
use serde::{de::DeserializeOwned, Serialize};

/// Floating-point scalar usable throughout the pipeline.
///
/// This is a blanket-implemented extension of [`num_traits::Float`]: any
/// type with the listed bounds (in practice `f32` and `f64`) gets the
/// implementation for free. The helper constructors centralize the
/// `Option`-returning `num_traits` conversions behind infallible calls;
/// they are infallible for primitive floats, which is the only kind of
/// scalar this crate instantiates.
pub trait Scalar:
    Float
    + NumAssign
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Display
    + Debug
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant (config values, RNG draws) into `Self`.
    fn from_real(v: f64) -> Self {
        Self::from_f64(v).expect("f64 converts to any primitive float")
    }

    /// Converts an integer count into `Self` (exact for the count
    /// magnitudes this crate produces).
    fn from_count(c: u64) -> Self {
        Self::from_u64(c).expect("u64 converts to any primitive float")
    }

    /// Widens to `f64`, e.g. for timing or diagnostics.
    fn as_f64(self) -> f64 {
        self.to_f64().expect("primitive float converts to f64")
    }
}

impl<T> Scalar for T where
    T: Float
        + NumAssign
        + FromPrimitive
        + ToPrimitive
        + Sum
        + Display
        + Debug
        + Serialize
        + DeserializeOwned
        + Send
        + Sync
        + 'static
{
}
