//! Numerical toolkit for Hilbert-type operators induced by positive Borel
//! measures on `[0,1)`, acting on weighted Bergman and Dirichlet spaces of
//! the unit disk.
//!
//! The crate provides:
//!
//! * [`measure`] — a representable family of positive measures on `[0,1)`
//!   (atoms plus `(1-t)^gamma (log 2/(1-t))^delta` densities) with moments,
//!   tails, and adaptive integration against them;
//! * [`carleson`] — classification of measures against (vanishing,
//!   logarithmic) `s`-Carleson tail conditions and the threshold exponents
//!   that govern operator boundedness;
//! * [`taylor`] / [`spaces`] — truncated Taylor series, weighted Bergman /
//!   Dirichlet / Bloch norm estimation by disk quadrature, and the extremal
//!   kernel-power test families;
//! * [`operator`] — the moment-matrix, coefficient-integral, and direct
//!   integral realizations of the operator together with the
//!   well-definedness gate;
//! * [`probes`] — runnable numerical experiments: duality pairings,
//!   embedding ratios, boundedness lower-bound scans, norm-ratio suprema,
//!   and compactness probes.
//!
//! The crate is `no_std` (it requires `alloc`); all IO, file formats, and
//! the experiment CLI live in the companion `hmu-cli` crate.

#![no_std]
// Parameter checks are written as negated comparisons (`!(x > 0.0)`) so
// that NaN fails validation instead of slipping through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

#[macro_use]
extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod carleson;
pub mod error;
pub mod measure;
pub mod operator;
pub mod probes;
pub mod quad;
pub mod spaces;
pub mod special;
pub mod taylor;

pub use error::Error;
pub use measure::{DensityTerm, MeasureSpec};
pub use operator::OperatorSpec;
pub use spaces::{QuadratureGrid, SpaceKind, SpaceParams};
pub use taylor::TaylorPoly;

/// Complex scalar used throughout the crate.
pub type Complex64 = num_complex::Complex<f64>;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
