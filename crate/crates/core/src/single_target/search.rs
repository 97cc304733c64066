use std::sync::Arc;
use std::time::Instant;

use rustc_hash::FxHashMap;

use crate::all_targets::{compute_table, Choice, ComplexityTable, Engine};
use crate::bounds::log3;
use crate::factorization::{factorize, isqrt, MAX_FACTOR_INPUT};
use crate::{Complexity, Error, Limits, Result, INFINITY};

/// Prefix sizes chosen by [`Evaluator::for_target`] lie in this range.
const MIN_PREFIX: usize = 1 << 12;
const MAX_PREFIX: usize = 1 << 24;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Calls of the bounded decision procedure above the prefix.
    pub nodes: u64,
    /// Distinct values with a memo entry.
    pub memo_entries: usize,
    pub factorizations: u64,
}

#[derive(Clone, Copy)]
struct Bounds {
    /// proven `f >= lo`
    lo: Complexity,
    /// proven `f <= hi`
    hi: Complexity,
}

/// Memoized exact evaluator for single values.
///
/// `f(v) <= t` is decided by trying `f(j) + f(v/j)` over divisor pairs and
/// `f(b) + f(v - b)` over small `b`, abandoning every branch whose
/// `3 log_3` lower bound already exceeds the budget. Exact values come from
/// raising `t` one step at a time from the best known lower bound.
pub struct Evaluator {
    prefix: Arc<ComplexityTable>,
    memo: FxHashMap<u128, Bounds>,
    divisors: FxHashMap<u128, Arc<[u128]>>,
    deadline: Option<Instant>,
    stats: SearchStats,
}

/// `ceil(3 log_3 v)` rounded down slightly, so it never exceeds the exact bound.
#[inline]
fn lb(v: u128) -> Complexity {
    if v <= 1 {
        return 0;
    }
    (3.0 * log3(v as f64) - 1e-7).ceil() as Complexity
}

impl Evaluator {
    /// Shares an existing prefix table, e.g. across threads.
    pub fn with_prefix(prefix: Arc<ComplexityTable>) -> Self {
        Self {
            prefix,
            memo: FxHashMap::default(),
            divisors: FxHashMap::default(),
            deadline: None,
            stats: SearchStats::default(),
        }
    }

    pub fn new(prefix_len: usize, limits: &Limits) -> Result<Self> {
        let table = compute_table(prefix_len.max(1), limits, Engine::Capped)?;
        Ok(Self::with_prefix(Arc::new(table)))
    }

    /// Prefix of about `4 sqrt(n)` entries, clamped to `[2^12, 2^24]`.
    pub fn for_target(n: u128, limits: &Limits) -> Result<Self> {
        Self::new(Self::default_prefix_len(n), limits)
    }

    pub fn default_prefix_len(n: u128) -> usize {
        let s = isqrt(n).saturating_mul(4);
        s.clamp(MIN_PREFIX as u128, MAX_PREFIX as u128) as usize
    }

    pub fn prefix(&self) -> &Arc<ComplexityTable> {
        &self.prefix
    }

    /// Evaluations past `deadline` fail with [`Error::BudgetExhausted`].
    pub fn set_deadline(&mut self, deadline: Option<Instant>) {
        self.deadline = deadline;
    }

    pub fn stats(&self) -> SearchStats {
        SearchStats {
            memo_entries: self.memo.len(),
            ..self.stats.clone()
        }
    }

    /// Drops memoized bounds and divisor lists; the prefix is kept.
    pub fn clear_memo(&mut self) {
        self.memo.clear();
        self.divisors.clear();
    }

    /// Exact `f(n)`, `1 <= n < 2^127`.
    pub fn f(&mut self, n: u128) -> Result<Complexity> {
        if n == 0 || n >= MAX_FACTOR_INPUT {
            return Err(Error::OutOfRange(format!("target must satisfy 1 <= n < 2^127, got {n}")));
        }
        self.exact(n)
    }

    /// Exact `f'(n)`: the best expression whose last operation is a product
    /// (`f'(1) = 1`, `INFINITY` for primes).
    pub fn f_mul(&mut self, n: u128) -> Result<Complexity> {
        if n == 0 || n >= MAX_FACTOR_INPUT {
            return Err(Error::OutOfRange(format!("target must satisfy 1 <= n < 2^127, got {n}")));
        }
        if n == 1 {
            return Ok(1);
        }
        let mut best = INFINITY;
        for j in self.small_divisors(n).iter() {
            let s = self.exact(*j)? + self.exact(n / j)?;
            best = best.min(s);
        }
        Ok(best)
    }

    /// The split of `v` a witness should use: the smallest factor `j` with
    /// `f(j) + f(v/j) = f(v)` if any, else the smallest addend.
    pub fn split(&mut self, v: u128) -> Result<Choice> {
        let fv = self.f(v)?;
        if v == 1 {
            return Ok(Choice::One);
        }
        for &j in self.small_divisors(v).iter() {
            let fj = self.exact(j)?;
            if fj < fv && self.prove(v / j, fv - fj)? {
                return Ok(Choice::Mul(j as u64));
            }
        }
        let limit = 3f64.powf(fv as f64 / 3.0) * (1.0 + 1e-9);
        let mut b = 1u128;
        while b <= v / 2 && (b as f64) * ((v - b) as f64) <= limit {
            let fb = self.exact(b)?;
            if fb < fv && self.prove(v - b, fv - fb)? {
                return Ok(Choice::Add(b as u64));
            }
            b += 1;
        }
        Err(Error::WindowInvariant(format!("no split of {v} reaches f = {fv}")))
    }

    fn in_prefix(&self, v: u128) -> bool {
        v <= self.prefix.n() as u128
    }

    fn exact(&mut self, v: u128) -> Result<Complexity> {
        if self.in_prefix(v) {
            return Ok(self.prefix.get(v as usize));
        }
        let b = self.bounds(v);
        let mut t = b.lo;
        while t < b.hi {
            if self.prove(v, t)? {
                break;
            }
            t += 1;
        }
        self.memo.insert(v, Bounds { lo: t, hi: t });
        Ok(t)
    }

    fn bounds(&self, v: u128) -> Bounds {
        self.memo.get(&v).copied().unwrap_or(Bounds {
            lo: lb(v),
            hi: INFINITY,
        })
    }

    fn tick(&mut self) -> Result<()> {
        self.stats.nodes += 1;
        if self.stats.nodes % 4096 == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    return Err(Error::BudgetExhausted);
                }
            }
        }
        Ok(())
    }

    /// Divisors `j` of `v` with `2 <= j <= sqrt(v)`, ascending.
    fn small_divisors(&mut self, v: u128) -> Arc<[u128]> {
        if let Some(d) = self.divisors.get(&v) {
            return d.clone();
        }
        self.stats.factorizations += 1;
        let list: Arc<[u128]> = if v < 4 {
            Arc::from(Vec::new())
        } else {
            factorize(v)
                .divisors()
                .into_iter()
                .skip(1)
                .take_while(|&j| j <= v / j)
                .collect::<Vec<_>>()
                .into()
        };
        self.divisors.insert(v, list.clone());
        list
    }

    /// Decides `f(v) <= t`.
    fn prove(&mut self, v: u128, t: Complexity) -> Result<bool> {
        if self.in_prefix(v) {
            return Ok(self.prefix.get(v as usize) <= t);
        }
        let b = self.bounds(v);
        if t < b.lo {
            return Ok(false);
        }
        if t >= b.hi {
            return Ok(true);
        }
        self.tick()?;
        let found = self.prove_product(v, t)? || self.prove_sum(v, t)?;
        let entry = self.memo.entry(v).or_insert(b);
        if found {
            entry.hi = entry.hi.min(t);
        } else {
            entry.lo = entry.lo.max(t + 1);
        }
        Ok(found)
    }

    fn prove_product(&mut self, v: u128, t: Complexity) -> Result<bool> {
        let divs = self.small_divisors(v);
        for &j in divs.iter() {
            let k = v / j;
            let lo_j = self.bounds_or_prefix(j).0;
            if lo_j as u16 + lb(k) as u16 > t as u16 {
                continue;
            }
            let fj = self.exact(j)?;
            if fj as u16 + lb(k) as u16 > t as u16 {
                continue;
            }
            if self.prove(k, t - fj)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn prove_sum(&mut self, v: u128, t: Complexity) -> Result<bool> {
        // f(b) + f(v - b) >= 3 log_3(b (v - b)), increasing in b up to v / 2
        let limit = 3f64.powf(t as f64 / 3.0) * (1.0 + 1e-9);
        let half = v / 2;
        let mut b = 1u128;
        while b <= half {
            let a = v - b;
            if (b as f64) * (a as f64) > limit {
                break;
            }
            let fb = self.exact(b)?;
            if fb < t && fb as u16 + lb(a) as u16 <= t as u16 && self.prove(a, t - fb)? {
                return Ok(true);
            }
            b += 1;
        }
        Ok(false)
    }

    fn bounds_or_prefix(&self, v: u128) -> (Complexity, Complexity) {
        if self.in_prefix(v) {
            let x = self.prefix.get(v as usize);
            (x, x)
        } else {
            let b = self.bounds(v);
            (b.lo, b.hi)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::all_targets::naive_oracle;

    #[test]
    fn tiny_prefix_matches_oracle() {
        let l = Limits::default();
        let oracle = naive_oracle(20_000).unwrap();
        let mut e = Evaluator::new(50, &l).unwrap();
        for n in 1..=20_000u128 {
            assert_eq!(e.f(n).unwrap(), oracle.get(n as usize), "n = {n}");
        }
    }

    #[test]
    fn multiplicative_complexity() {
        let l = Limits::default();
        let mut e = Evaluator::new(10, &l).unwrap();
        assert_eq!(e.f_mul(1).unwrap(), 1);
        assert_eq!(e.f_mul(6).unwrap(), 5);
        assert_eq!(e.f_mul(7).unwrap(), INFINITY);
        assert_eq!(e.f_mul(1000).unwrap(), e.f(1000).unwrap());
    }

    #[test]
    fn lower_bound_estimate_is_safe() {
        for v in 1..100_000u128 {
            assert!(lb(v) <= crate::bounds::lower_bound(v));
        }
        let mut p = 3u128;
        for _ in 1..80 {
            assert!(lb(p) <= crate::bounds::lower_bound(p));
            p *= 3;
        }
    }
}
