//! Evaluation of the Mittag-Leffler function and numerical verification of
//! the binomial and Mittag-Leffler inequalities built on the extended
//! binomial theorem.
//!
//! Every check runs through at least two independent computational routes
//! (power series, integral representations, Monte Carlo) and reports a
//! holds / fails / inconclusive verdict with a signed margin.

// `!(x > 0.0)` is the NaN-rejecting guard used throughout
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod binomial;
pub mod cli;
pub mod error;
mod eval_result;
pub mod gamma;
pub mod mittag_leffler;
pub mod quadrature;
pub mod stable;
pub mod summation;
pub mod verify;

pub use error::{Error, Result};
pub use eval_result::EvalResult;
pub use quadrature::{QuadratureSpec, Substitution};
