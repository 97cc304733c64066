//! Batched divisor machinery for dense tables.

use crate::{Error, Result};

/// Default cap on the number of stored divisor entries (about 1 GiB of `u32`).
pub const DEFAULT_DIVISOR_BUDGET: u128 = 1 << 28;

/// Divisor lists `D_1..D_N` in compressed row layout.
#[derive(Clone, Debug)]
pub struct DivisorLists {
    offsets: Vec<usize>,
    entries: Vec<u32>,
}

impl DivisorLists {
    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Sorted divisors of `i` (`1 <= i <= N`).
    pub fn get(&self, i: usize) -> &[u32] {
        assert!(i >= 1 && i <= self.len(), "index {i} outside 1..={}", self.len());
        &self.entries[self.offsets[i - 1]..self.offsets[i]]
    }

    pub fn total_entries(&self) -> usize {
        self.entries.len()
    }
}

/// Every divisor list up to `n`, built by walking the multiples of each `i`.
pub fn divisor_sieve(n: usize) -> Result<DivisorLists> {
    divisor_sieve_with_budget(n, DEFAULT_DIVISOR_BUDGET)
}

pub fn divisor_sieve_with_budget(n: usize, budget: u128) -> Result<DivisorLists> {
    if n == 0 {
        return Err(Error::OutOfRange("divisor_sieve needs N >= 1".into()));
    }
    if n > u32::MAX as usize {
        return Err(Error::OutOfRange(format!("divisor_sieve supports N < 2^32, got {n}")));
    }
    // sum_{i<=n} floor(n/i) <= n (ln n + 1)
    let needed = (n as f64 * ((n as f64).ln() + 1.0)).ceil() as u128;
    if needed > budget {
        return Err(Error::MemoryBudget { needed, budget });
    }
    let mut counts = vec![0usize; n + 1];
    for i in 1..=n {
        let mut k = i;
        while k <= n {
            counts[k] += 1;
            k += i;
        }
    }
    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0);
    for k in 1..=n {
        let last = *offsets.last().unwrap();
        offsets.push(last + counts[k]);
    }
    let mut cursor: Vec<usize> = offsets[..n].to_vec();
    let mut entries = vec![0u32; offsets[n]];
    for i in 1..=n {
        let mut k = i;
        while k <= n {
            entries[cursor[k - 1]] = i as u32;
            cursor[k - 1] += 1;
            k += i;
        }
    }
    Ok(DivisorLists { offsets, entries })
}

/// Smallest-prime-factor table for `2..=N`, `N < 2^32`.
///
/// Composite values below 2^32 have a least prime factor below 2^16, so each
/// entry fits a `u16`; a stored 0 marks a prime.
#[derive(Clone, Debug)]
pub struct SpfSieve {
    spf: Vec<u16>,
}

pub fn build_spf(n: usize) -> Result<SpfSieve> {
    if n > u32::MAX as usize {
        return Err(Error::OutOfRange(format!("build_spf supports N < 2^32, got {n}")));
    }
    let mut spf = vec![0u16; n + 1];
    let mut p = 2usize;
    while p * p <= n {
        if spf[p] == 0 {
            let mut k = p * p;
            while k <= n {
                if spf[k] == 0 {
                    spf[k] = p as u16;
                }
                k += p;
            }
        }
        p += 1;
    }
    Ok(SpfSieve { spf })
}

impl SpfSieve {
    pub fn limit(&self) -> usize {
        self.spf.len() - 1
    }

    /// Least prime factor of `n`, `2 <= n <= limit`.
    #[inline]
    pub fn spf(&self, n: usize) -> usize {
        match self.spf[n] {
            0 => n,
            p => p as usize,
        }
    }

    pub fn is_prime(&self, n: usize) -> bool {
        n >= 2 && self.spf[n] == 0
    }

    /// Clears `out` and fills it with the divisors of `n` in no particular order.
    pub fn divisors_into(&self, n: usize, out: &mut Vec<usize>) {
        out.clear();
        out.push(1);
        let mut rest = n;
        while rest > 1 {
            let p = self.spf(rest);
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            let len = out.len();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    out.push(out[i] * pk);
                }
            }
        }
    }
}

/// Sorted divisors of `n` read off the sieve.
pub fn divisors_of(n: usize, sieve: &SpfSieve) -> Result<Vec<usize>> {
    if n < 1 || n > sieve.limit() {
        return Err(Error::OutOfRange(format!(
            "{n} outside sieve range 1..={}",
            sieve.limit()
        )));
    }
    let mut out = Vec::new();
    sieve.divisors_into(n, &mut out);
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_divisor_lists() {
        let d = divisor_sieve(1).unwrap();
        assert_eq!(d.get(1), &[1]);
        let d = divisor_sieve(12).unwrap();
        assert_eq!(d.get(12), &[1, 2, 3, 4, 6, 12]);
        assert_eq!(d.get(7), &[1, 7]);
    }

    #[test]
    fn divisor_count_identity() {
        let n = 10_000;
        let d = divisor_sieve(n).unwrap();
        let want: usize = (1..=n).map(|i| n / i).sum();
        assert_eq!(d.total_entries(), want);
    }

    #[test]
    fn budget_rejected_before_allocation() {
        assert!(matches!(
            divisor_sieve_with_budget(1_000_000, 1000),
            Err(Error::MemoryBudget { .. })
        ));
        assert!(divisor_sieve(0).is_err());
    }

    #[test]
    fn spf_examples() {
        let s = build_spf(100).unwrap();
        assert_eq!(divisors_of(97, &s).unwrap(), vec![1, 97]);
        assert_eq!(divisors_of(36, &s).unwrap(), vec![1, 2, 3, 4, 6, 9, 12, 18, 36]);
        assert_eq!(s.spf(91), 7);
        assert_eq!(s.spf(97), 97);
        assert!(divisors_of(101, &s).is_err());
    }

    #[test]
    fn spf_divisors_match_divisor_sieve() {
        let n = 10_000;
        let d = divisor_sieve(n).unwrap();
        let s = build_spf(n).unwrap();
        for i in 1..=n {
            let got = divisors_of(i, &s).unwrap();
            let want: Vec<usize> = d.get(i).iter().map(|&x| x as usize).collect();
            assert_eq!(got, want, "i = {i}");
        }
    }
}
