//! A laboratory for jigsaw percolation on double graphs.
//!
//! A double graph is a vertex set carrying two independent edge sets, red and
//! blue. The jigsaw process repeatedly merges clusters joined by at least one
//! edge of each colour; it percolates when a single cluster remains. This
//! crate provides:
//!
//! * seeded sparse sampling of random double graphs ([`graph`]),
//! * the jigsaw process itself with per-round traces ([`jigsaw`]),
//! * the absorption process and an exhaustive input search ([`absorption`]),
//! * the multi-round supercritical construction algorithm ([`construction`]),
//! * exhaustive enumeration of minimal percolating configurations and the
//!   counting bounds they are checked against ([`enumeration`]),
//! * exact identity checks, truncated-Poisson domination machinery and the
//!   bottleneck-equation solver ([`analysis`]),
//! * the seeded Monte Carlo harness behind the `jigsaw` command ([`harness`]).
//!
//! Numerical code that does not depend on a particular number type is generic
//! over [`Scalar`] / [`RealScalar`]; the aliases below fix the common choices.

pub mod absorption;
pub mod analysis;
pub mod construction;
mod dsu;
pub mod enumeration;
pub mod error;
pub mod graph;
pub mod harness;
pub mod hifloat;
pub mod jigsaw;
pub mod rng;
pub mod scalar;

pub use error::{Error, Result};
pub use graph::{Colour, DoubleGraph, GenParams, Vertex};
pub use hifloat::HiFloat;
pub use jigsaw::{percolates, run_jigsaw, JigsawResult, JigsawState};
pub use scalar::{RealScalar, Scalar};

/// Arbitrary-precision rational, always stored in lowest terms.
pub type Rational = num_rational::BigRational;

/// Distribution with exact rational masses.
pub type ExactDist = analysis::DiscreteDist<Rational>;
/// Distribution with `f64` masses.
pub type FloatDist = analysis::DiscreteDist<f64>;
/// Distribution with `f32` masses.
pub type SingleDist = analysis::DiscreteDist<f32>;
/// Distribution with 576-bit floating masses.
pub type HiDist = analysis::DiscreteDist<HiFloat>;
