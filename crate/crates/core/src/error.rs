//! Error type shared by all numerical operations.

use alloc::string::String;
use core::fmt;

/// Failure modes of the numerical kernels.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Adaptive refinement exceeded its depth/segment budget without meeting
    /// the requested tolerance. Signals a non-integrable or pathological
    /// integrand.
    NonConvergent {
        /// Best value reached before giving up.
        partial: f64,
        /// Error estimate attached to `partial`.
        estimate: f64,
    },
    /// A disk-quadrature grid failed its internal refinement check or is too
    /// small for the polynomial degree it was asked to integrate.
    GridTooCoarse {
        /// Observed discrepancy between the grid and its refinement.
        discrepancy: f64,
        /// Tolerance the check was held to.
        tolerance: f64,
    },
    /// A truncated series construction could not meet its tail bound at the
    /// requested order.
    TruncationInsufficient {
        /// Truncation order that was requested.
        order: usize,
        /// Estimated relative tail mass left out.
        tail_bound: f64,
    },
    /// The measure tail vanishes on part of the requested grid, so a
    /// log-log exponent fit is impossible there.
    DegenerateTail {
        /// First grid point at which the tail vanished.
        at: f64,
    },
    /// Parameters violate the hypotheses of the selected theorem case.
    InvalidCase(String),
    /// A constructor or operation received an out-of-range argument.
    InvalidParameter(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonConvergent { partial, estimate } => write!(
                f,
                "adaptive integration did not converge (partial value {partial:e}, error estimate {estimate:e})"
            ),
            Error::GridTooCoarse {
                discrepancy,
                tolerance,
            } => write!(
                f,
                "quadrature grid too coarse: refinement changed the result by {discrepancy:e} (tolerance {tolerance:e})"
            ),
            Error::TruncationInsufficient { order, tail_bound } => write!(
                f,
                "series truncation at order {order} leaves a relative tail of {tail_bound:e}"
            ),
            Error::DegenerateTail { at } => {
                write!(f, "measure tail vanishes at t = {at}; exponent fit is degenerate")
            }
            Error::InvalidCase(msg) => write!(f, "invalid theorem case: {msg}"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
