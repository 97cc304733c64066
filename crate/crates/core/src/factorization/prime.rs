//! Primality and factorization for values up to 2^127.
//!
//! Miller-Rabin with the first 13 prime bases is exact below
//! 3.317 * 10^24. Above that there is no known finite witness set of this
//! kind, so the base-2 test is combined with a strong Lucas test (BPSW).

use super::modarith::{Mont128, Mont64, MontArith};

const MR_BASES: [u128; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
/// Below this bound the 13 bases above decide primality exactly.
const MR_DETERMINISTIC_LIMIT: u128 = 3_317_044_064_679_887_385_961_981;

pub const MAX_FACTOR_INPUT: u128 = 1 << 127;

const SMALL_PRIME_LIMIT: u32 = 1 << 10;

fn small_primes() -> &'static [u32] {
    use std::sync::OnceLock;
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = SMALL_PRIME_LIMIT as usize;
        let mut composite = vec![false; n];
        let mut out = Vec::new();
        for i in 2..n {
            if !composite[i] {
                out.push(i as u32);
                let mut j = i * i;
                while j < n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        out
    })
}

/// Exact primality for `1 <= n < 2^127`.
pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &small_primes()[..16] {
        let p = p as u128;
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    if n < 53 * 53 {
        return true;
    }
    if n <= u64::MAX as u128 {
        let m = Mont64::new(n as u64);
        return MR_BASES.iter().all(|&a| strong_probable_prime(&m, a));
    }
    assert!(n < MAX_FACTOR_INPUT, "is_prime supports n < 2^127");
    let m = Mont128::new(n);
    if !MR_BASES.iter().all(|&a| strong_probable_prime(&m, a)) {
        return false;
    }
    if n < MR_DETERMINISTIC_LIMIT {
        return true;
    }
    strong_lucas_probable_prime(&m)
}

fn strong_probable_prime<M: MontArith>(m: &M, base: u128) -> bool {
    let n = m.modulus();
    let n_minus_1 = n - 1;
    let s = n_minus_1.trailing_zeros();
    let d = n_minus_1 >> s;
    let one = m.one();
    let minus_one = m.sub(m.zero(), one);
    let mut x = m.pow(m.to_mont(base), d);
    if x == one || x == minus_one || m.raw(x) == m.raw(m.zero()) {
        return true;
    }
    for _ in 1..s {
        x = m.mul(x, x);
        if x == minus_one {
            return true;
        }
        if x == one {
            return false;
        }
    }
    false
}

fn jacobi(mut a: i128, n: u128) -> i32 {
    // n odd, positive
    let n_i = n as i128;
    a = a.rem_euclid(n_i);
    let mut a = a as u128;
    let mut n = n;
    let mut result = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

pub(crate) fn isqrt(n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x.checked_mul(x).map_or(true, |sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

/// Strong Lucas test with Selfridge's parameter choice (P = 1).
fn strong_lucas_probable_prime<M: MontArith>(m: &M) -> bool {
    let n = m.modulus();
    let r = isqrt(n);
    if r * r == n {
        return false;
    }
    let mut d: i128 = 5;
    loop {
        match jacobi(d, n) {
            -1 => break,
            0 => {
                if d.unsigned_abs() != n {
                    return false;
                }
            }
            _ => {}
        }
        d = if d > 0 { -(d + 2) } else { -d + 2 };
    }
    let to_elem = |v: i128| {
        if v >= 0 {
            m.to_mont(v as u128)
        } else {
            m.sub(m.zero(), m.to_mont(v.unsigned_abs()))
        }
    };
    let d_m = to_elem(d);
    let q_m = to_elem((1 - d) / 4);

    let k = n + 1;
    let s = k.trailing_zeros();
    let odd = k >> s;

    // Left-to-right Lucas chain for (U_odd, V_odd, Q^odd), P = 1.
    let mut u = m.one();
    let mut v = m.one();
    let mut qk = q_m;
    let bits = 128 - odd.leading_zeros();
    for i in (0..bits - 1).rev() {
        u = m.mul(u, v);
        v = m.sub(m.mul(v, v), m.add(qk, qk));
        qk = m.mul(qk, qk);
        if (odd >> i) & 1 == 1 {
            let u_next = m.half(m.add(u, v));
            let v_next = m.half(m.add(m.mul(d_m, u), v));
            u = u_next;
            v = v_next;
            qk = m.mul(qk, q_m);
        }
    }
    let zero = m.zero();
    if u == zero || v == zero {
        return true;
    }
    for _ in 1..s {
        v = m.sub(m.mul(v, v), m.add(qk, qk));
        qk = m.mul(qk, qk);
        if v == zero {
            return true;
        }
    }
    false
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Brent's cycle-finding variant of Pollard rho with batched gcds.
/// Returns a nontrivial factor, or `None` if this increment cycled out.
fn rho_brent<M: MontArith>(m: &M, increment: u128) -> Option<u128> {
    const BATCH: u64 = 128;
    let n = m.modulus();
    let c = m.to_mont(increment);
    let step = |x: M::Elem| m.add(m.mul(x, x), c);
    let mut y = m.to_mont(2);
    let mut x = y;
    let mut ys = y;
    let mut q = m.one();
    let mut g = 1u128;
    let mut r: u64 = 1;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = step(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            let lim = BATCH.min(r - k);
            for _ in 0..lim {
                y = step(y);
                q = m.mul(q, m.sub(x, y));
            }
            g = gcd(m.raw(q), n);
            k += lim;
        }
        r <<= 1;
        if r > 1 << 40 {
            return None;
        }
    }
    if g == n {
        loop {
            ys = step(ys);
            g = gcd(m.raw(m.sub(x, ys)), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn find_factor(n: u128) -> u128 {
    for increment in 1..64u128 {
        let found = if n <= u64::MAX as u128 {
            rho_brent(&Mont64::new(n as u64), increment)
        } else {
            rho_brent(&Mont128::new(n), increment)
        };
        if let Some(d) = found {
            return d;
        }
    }
    // Every increment cycled out: fall back to trial division.
    let mut d = SMALL_PRIME_LIMIT as u128 | 1;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 2;
    }
    n
}

/// Prime factorization as `(prime, exponent)` pairs in increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FactorMap(Vec<(u128, u32)>);

impl FactorMap {
    pub fn pairs(&self) -> &[(u128, u32)] {
        &self.0
    }

    /// Product of the prime powers, `None` if it does not fit in `u128`.
    pub fn value(&self) -> Option<u128> {
        self.0.iter().try_fold(1u128, |acc, &(p, e)| {
            let pe = p.checked_pow(e)?;
            acc.checked_mul(pe)
        })
    }

    pub fn is_prime_power(&self) -> bool {
        self.0.len() == 1
    }

    /// All divisors in increasing order.
    pub fn divisors(&self) -> Vec<u128> {
        let mut divs = vec![1u128];
        for &(p, e) in &self.0 {
            let len = divs.len();
            let mut pk = 1u128;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

/// Complete factorization of `n` (`2 <= n < 2^127`). Deterministic: the rho
/// increments are tried in the fixed order 1, 2, 3, ...
pub fn factorize(n: u128) -> FactorMap {
    assert!(n >= 2, "factorize needs n >= 2");
    assert!(n < MAX_FACTOR_INPUT, "factorize supports n < 2^127");
    let mut primes: Vec<u128> = Vec::new();
    let mut rest = n;
    for &p in small_primes() {
        let p = p as u128;
        if p * p > rest {
            break;
        }
        while rest % p == 0 {
            primes.push(p);
            rest /= p;
        }
    }
    let mut stack = Vec::new();
    if rest > 1 {
        stack.push(rest);
    }
    while let Some(m) = stack.pop() {
        if m < (SMALL_PRIME_LIMIT as u128).pow(2) || is_prime(m) {
            // Every prime below the trial limit has already been removed.
            primes.push(m);
            continue;
        }
        let d = find_factor(m);
        stack.push(d);
        stack.push(m / d);
    }
    primes.sort_unstable();
    let mut pairs: Vec<(u128, u32)> = Vec::new();
    for p in primes {
        match pairs.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => pairs.push((p, 1)),
        }
    }
    FactorMap(pairs)
}

/// Trial-division factorization, used as an independent check.
pub fn factorize_trial(n: u128) -> FactorMap {
    assert!(n >= 2);
    let mut pairs = Vec::new();
    let mut rest = n;
    let mut d = 2u128;
    while d * d <= rest {
        if rest % d == 0 {
            let mut e = 0;
            while rest % d == 0 {
                rest /= d;
                e += 1;
            }
            pairs.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        pairs.push((rest, 1));
    }
    FactorMap(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_is_prime(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn is_prime_examples() {
        assert!(!is_prime(1));
        assert!(is_prime(97));
        assert!(!is_prime(733u128.pow(6)));
        assert!(is_prime((1u128 << 61) - 1));
        assert!(is_prime((1u128 << 89) - 1));
        assert!(is_prime((1u128 << 107) - 1));
        assert!(!is_prime((1u128 << 107) + 1));
        // strong pseudoprime to the bases 2..37 (Arnault-style numbers are larger)
        assert!(!is_prime(3_825_123_056_546_413_051));
        assert!(!is_prime(318_665_857_834_031_151_167_461));
        assert!(!is_prime(3_317_044_064_679_887_385_961_981));
    }

    #[test]
    fn is_prime_agrees_with_trial_division_small() {
        for n in 0..200_000u64 {
            assert_eq!(is_prime(n as u128), trial_is_prime(n), "n = {n}");
        }
    }

    #[test]
    fn lucas_accepts_primes_above_deterministic_limit() {
        // 2^89 - 1 and 2^107 - 1 are Mersenne primes; their product with small
        // cofactors is composite.
        let p = (1u128 << 89) - 1;
        let m = Mont128::new(p);
        assert!(strong_lucas_probable_prime(&m));
        let c = p * 3;
        let m = Mont128::new(c);
        assert!(!strong_lucas_probable_prime(&m));
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(91).pairs(), &[(7, 1), (13, 1)]);
        assert_eq!(factorize(1u128 << 64).pairs(), &[(2, 64)]);
        let p = 1_099_511_627_791u128; // 40-bit prime
        let q = 1_099_511_627_689u128; // 40-bit prime
        assert!(is_prime(p) && is_prime(q));
        assert_eq!(factorize(p * q).pairs(), &[(q, 1), (p, 1)]);
        assert_eq!(factorize(733u128.pow(6)).pairs(), &[(733, 6)]);
        assert_eq!(factorize(577u128.pow(12)).pairs(), &[(577, 12)]);
    }

    #[test]
    fn factorize_large_semiprime_beyond_u64() {
        let p = (1u128 << 61) - 1;
        let q = 1_000_000_007u128;
        let n = p * q * 6;
        assert_eq!(factorize(n).pairs(), &[(2, 1), (3, 1), (q, 1), (p, 1)]);
    }

    #[test]
    fn divisors_from_factor_map() {
        assert_eq!(
            factorize(36).divisors(),
            vec![1, 2, 3, 4, 6, 9, 12, 18, 36]
        );
        assert_eq!(factorize(97).divisors(), vec![1, 97]);
    }

    #[test]
    fn factorize_agrees_with_trial_division() {
        for n in 2..20_000u128 {
            let f = factorize(n);
            assert_eq!(f, factorize_trial(n), "n = {n}");
            assert_eq!(f.value(), Some(n));
        }
    }
}
