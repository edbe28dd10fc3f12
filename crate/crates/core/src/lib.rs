//! Exact decision, certification and construction tools for 3-monotone
//! interpolability of planar point sets.
//!
//! A function is 3-monotone when its first derivative is convex. A finite
//! point set is 3-monotone interpolable when it lies on the graph of such a
//! function. The crate decides this with exact rational arithmetic and
//! always returns evidence that can be re-verified independently:
//!
//! * [`interp`] verifies cone certificates (interpolable) and separating
//!   witnesses (not interpolable) and runs the cutting-plane engine;
//! * [`splines`] provides divided differences and B-spline bases;
//! * [`ramsey`] extracts large interpolable subsets via 5-tuple colorings;
//! * [`constructions`] generates the non-local and exponential-digit families;
//! * [`sdp`] compiles the non-positivity problem to a semidefinite program in
//!   SDPA sparse format.

pub mod error;
pub mod exactmath;
pub mod splines;
pub mod interp;
pub mod ramsey;
pub mod constructions;
pub mod sdp;

pub use error::{Error, Result};
