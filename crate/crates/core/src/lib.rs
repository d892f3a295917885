//! Exact counting of Pell-equation solutions in the window
//! `η_D <= D^(1/2 + α)`, together with the arithmetic used to study it:
//! square roots of unity, complete exponential sums and their bounds,
//! smooth numbers and the Dickman function, and the asymptotic
//! lower-bound coefficients.
//!
//! Heavy loops run through [`exec::Exec`], which is data-parallel under the
//! default `parallel` feature and sequential otherwise.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arith;
pub mod bounds;
pub mod error;
pub mod exec;
pub mod expsum;
pub mod pell;
pub mod quad;
pub mod report;
pub mod rng;
pub mod roots;
pub mod smooth;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Exec;
