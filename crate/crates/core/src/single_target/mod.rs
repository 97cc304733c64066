//! Single values `f(n)` without a full table.
//!
//! The reference engine materializes windows `[r - W, r]` for every
//! `r = n / d` above a precomputed prefix, innermost (largest `d`) first.
//! Multiplicative values in a window read the smaller factor from the prefix
//! and the larger one from the window of `r / j`; additive values combine
//! the window's multiplicative values with a short prefix slice.
//!
//! [`Evaluator`] is the fast path: a memoized branch-and-bound over the same
//! recurrences, pruned by the `3 log_3` lower bound, which only visits values
//! a proof actually needs.

mod search;
mod window;

pub use search::{Evaluator, SearchStats};
pub use window::{compute_single_with, WindowPlan, WindowStats};

use crate::{Complexity, Limits, Result};

/// Slack added to window lengths and prefix sizes to absorb floor rounding.
pub const PAD: u64 = 8;

/// Largest prefix the reference engine will allocate.
pub const MAX_PREFIX: u64 = 1 << 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum WindowMode {
    /// Window at `n / d` sized by `(n / d)^ell`; prefix exponent `1 / (2 - ell)`.
    #[default]
    PerWindow,
    /// Every window sized by `n^ell`; prefix exponent `alpha / 6`.
    GlobalL,
}

/// How a window folds its multiplicative values into additive ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum WindowConv {
    /// Every pair `(b, v - b)` with `b` up to the window's addendum length.
    Brute,
    /// Stops once `3 log_3(b (v - b))` rules out a strict improvement.
    #[default]
    Pruned,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SingleOptions {
    pub mode: WindowMode,
    pub conv: WindowConv,
}

/// `f(n)` by the reference window engine with default options.
pub fn compute_single(n: u128, limits: &Limits, mode: WindowMode) -> Result<Complexity> {
    let opts = SingleOptions {
        mode,
        ..Default::default()
    };
    Ok(compute_single_with(n, limits, opts)?.0)
}

/// `f(n)` by the fast evaluator with its default prefix.
pub fn compute_single_fast(n: u128, limits: &Limits) -> Result<Complexity> {
    Evaluator::for_target(n, limits)?.f(n)
}
