//! Numeric constants and the bound functions every engine relies on.

use num_bigint::BigUint;

use crate::{Error, Result};

/// A complexity value. Finite values are `1..=MAX_FINITE`; [`INFINITY`]
/// marks "unknown" or "no decomposition of this kind".
pub type Complexity = u8;

pub const INFINITY: Complexity = 255;
pub const MAX_FINITE: Complexity = 254;

const LN_3: f64 = 1.098_612_288_668_109_8;

/// The upper-bound constant `alpha` and the exponents derived from it.
///
/// `ell` and `t` are computed from `alpha` on every access.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Limits {
    alpha: f64,
    alpha0_override: Option<f64>,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            alpha: Self::DEFAULT_ALPHA,
            alpha0_override: None,
        }
    }
}

impl Limits {
    pub const DEFAULT_ALPHA: f64 = 4.125;
    /// `3 log_2 3`, from writing `n` in binary.
    pub const MAX_ALPHA: f64 = 4.755;

    pub fn new(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self {
            alpha,
            alpha0_override: None,
        })
    }

    /// Replace `alpha` everywhere by a limsup-style constant. No exception
    /// set is tracked: the caller asserts the bound holds on the inputs used.
    pub fn with_alpha0(mut self, alpha0: f64) -> Result<Self> {
        check_alpha(alpha0)?;
        self.alpha0_override = Some(alpha0);
        Ok(self)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha0_override.unwrap_or(self.alpha)
    }

    pub fn alpha0_override(&self) -> Option<f64> {
        self.alpha0_override
    }

    /// Exponent of the addendum cap `L(n) = n^ell`.
    pub fn ell(&self) -> f64 {
        self.alpha() / 3.0 - 1.0
    }

    /// Prefix exponent balancing per-window caps.
    pub fn t(&self) -> f64 {
        1.0 / (2.0 - self.ell())
    }

    /// Prefix exponent when every window uses the global cap `L(n)`.
    pub fn t_global(&self) -> f64 {
        self.alpha() / 6.0
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 3.0 && alpha <= Limits::MAX_ALPHA {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}

/// `ceil(3 log_3 n)`: the least `k` with `3^k >= n^3`.
pub fn lower_bound(n: u128) -> Complexity {
    assert!(n >= 1, "lower_bound is defined for n >= 1");
    if n == 1 {
        return 0;
    }
    if n < (1 << 42) {
        // n^3 < 2^126 and 3^80 < 2^127: plain integer search.
        let cube = n * n * n;
        let mut k = 0u8;
        let mut pow = 1u128;
        while pow < cube {
            pow *= 3;
            k += 1;
        }
        return k;
    }
    let x = 3.0 * (n as f64).ln() / LN_3;
    let nearest = x.round();
    if (x - nearest).abs() > 1e-6 {
        return x.ceil() as Complexity;
    }
    // Too close to an integer for the float to decide.
    let k = nearest as u32;
    let cube = BigUint::from(n).pow(3);
    if BigUint::from(3u32).pow(k) >= cube {
        if k > 0 && BigUint::from(3u32).pow(k - 1) >= cube {
            (k - 1) as Complexity
        } else {
            k as Complexity
        }
    } else {
        (k + 1) as Complexity
    }
}

/// `floor(alpha log_3 n)`, valid for `n > 1`. The product is nudged up by one
/// ulp before flooring so rounding never undershoots the bound.
pub fn upper_bound(n: u128, limits: &Limits) -> Result<u16> {
    if n < 2 {
        return Err(Error::OutOfRange(format!(
            "upper_bound needs n >= 2, got {n}"
        )));
    }
    let x = limits.alpha() * (n as f64).ln() / LN_3;
    Ok(x.next_up().floor() as u16)
}

/// Cap on the smaller addendum of an optimal additive split:
/// `max(ceil(n^ell), 16)`.
pub fn addendum_limit(n: u128, limits: &Limits) -> u64 {
    let cap = (n as f64).powf(limits.ell()).ceil();
    (cap as u64).max(16)
}

/// `log_3 x` in floating point.
pub fn log3(x: f64) -> f64 {
    x.ln() / LN_3
}
