//! Geometric (multiplicative) calculus, the Fibonacci difference transform
//! and strongly summable Orlicz sequence spaces on finite truncations.

// `!(a <= b)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bisect;
pub mod error;
pub mod fibonacci;
pub mod geo;
pub mod harness;
pub mod io;
pub mod orlicz;
pub mod stat;
pub mod summability;

pub use error::{Error, Result};
pub use geo::{GeoScalar, GeoSequence};
pub use orlicz::OrliczFn;
pub use summability::{SpaceSpec, Variant};
