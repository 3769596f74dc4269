//! Experiment front end for the measure-induced Hilbert operator toolkit:
//! config parsing, deterministic result files, and the acceptance suite.

// NaN must fail parameter validation, hence the negated comparisons.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod commands;
pub mod config;
pub mod output;
