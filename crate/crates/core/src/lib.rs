//! Exact q-expansion calculus for level-one modular forms.
//!
//! The crate is layered bottom-up:
//!
//! - [`arith`]: rationals, floats, Bernoulli numbers, binomials and a small exact solver
//! - [`qseries`]: truncated power series in `q` and the eta-product for `Delta`
//! - [`forms`]: divisor sums, Eisenstein series, the tau table and the `E4^a E6^b` basis
//! - [`calculus`]: Rankin-Cohen brackets, Serre derivatives and Poincare seed functions
//! - [`poincare`]: formal Poincare series, admissibility and weight-12 tau relations
//! - [`lseries`]: high-precision shifted L-series and the tau identity checks
//! - [`cli`]: the expression language and the `modcalc` subcommands

pub mod arith;
pub mod calculus;
pub mod cli;
pub mod error;
pub mod forms;
pub mod lseries;
pub mod poincare;
pub mod qseries;

pub use error::{Error, Result};
