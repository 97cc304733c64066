//! Divisor sieves for dense tables and single-number factorization up to 2^127.

mod modarith;
mod prime;
mod sieve;

pub use prime::{factorize, factorize_trial, is_prime, FactorMap, MAX_FACTOR_INPUT};
pub(crate) use prime::isqrt;
pub use sieve::{
    build_spf, divisor_sieve, divisor_sieve_with_budget, divisors_of, DivisorLists, SpfSieve,
    DEFAULT_DIVISOR_BUDGET,
};
