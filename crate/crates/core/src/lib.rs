//! Integer complexity engines.
//!
//! `f(n)` is the least number of 1's needed to write `n` using `+`, `*` and
//! parentheses. This crate computes it two ways:
//!
//! * [`all_targets`] fills a dense table `f(1..=N)` with a divide-and-conquer
//!   online (min,+)-convolution for the additive case and divisor updates at
//!   the leaves for the multiplicative case.
//! * [`single_target`] evaluates one `f(n)` without touching most of `1..n`,
//!   by recursing over value windows ending at `n / d`.
//!
//! Around those sit witness reconstruction ([`witness`]), conjecture checks
//! ([`conjectures`]) and an average-complexity estimator ([`sampling`]).

pub mod all_targets;
pub mod bounds;
pub mod conjectures;
pub mod convolution;
mod error;
pub mod factorization;
pub mod sampling;
pub mod single_target;
pub mod table_io;
pub mod witness;

pub use bounds::{Complexity, Limits, INFINITY, MAX_FINITE};
pub use error::{Error, Result};
