//! Montgomery arithmetic for odd moduli below 2^64 and 2^127.

pub(crate) trait MontArith: Copy {
    type Elem: Copy + Eq;

    fn modulus(&self) -> u128;
    fn to_mont(&self, x: u128) -> Self::Elem;
    #[cfg_attr(not(test), allow(dead_code))]
    fn from_mont(&self, x: Self::Elem) -> u128;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    /// `a / 2`, valid because Montgomery form is linear.
    fn half(&self, a: Self::Elem) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn zero(&self) -> Self::Elem;
    /// Raw residue representative, suitable for gcd with the modulus.
    fn raw(&self, a: Self::Elem) -> u128;

    fn pow(&self, mut base: Self::Elem, mut exp: u128) -> Self::Elem {
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Mont64 {
    n: u64,
    neg_inv: u64,
    r2: u64,
    one: u64,
}

impl Mont64 {
    pub(crate) fn new(n: u64) -> Self {
        debug_assert!(n % 2 == 1 && n > 1);
        let mut inv = n;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(n.wrapping_mul(inv)));
        }
        debug_assert_eq!(n.wrapping_mul(inv), 1);
        let r = ((u64::MAX % n) + 1) % n;
        let r2 = ((r as u128 * r as u128) % n as u128) as u64;
        Self {
            n,
            neg_inv: inv.wrapping_neg(),
            r2,
            one: r,
        }
    }

    #[inline]
    fn reduce(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let (s, carry) = t.overflowing_add(m as u128 * self.n as u128);
        let r = (s >> 64) as u64;
        if carry || r >= self.n {
            r.wrapping_sub(self.n)
        } else {
            r
        }
    }
}

impl MontArith for Mont64 {
    type Elem = u64;

    fn modulus(&self) -> u128 {
        self.n as u128
    }

    #[inline]
    fn to_mont(&self, x: u128) -> u64 {
        let x = (x % self.n as u128) as u64;
        self.reduce(x as u128 * self.r2 as u128)
    }

    #[inline]
    fn from_mont(&self, x: u64) -> u128 {
        self.reduce(x as u128) as u128
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a as u128 * b as u128)
    }

    #[inline]
    fn add(&self, a: u64, b: u64) -> u64 {
        let (s, c) = a.overflowing_add(b);
        if c || s >= self.n {
            s.wrapping_sub(self.n)
        } else {
            s
        }
    }

    #[inline]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a.wrapping_sub(b).wrapping_add(self.n)
        }
    }

    #[inline]
    fn half(&self, a: u64) -> u64 {
        if a & 1 == 0 {
            a >> 1
        } else {
            // (a + n) / 2 without overflow
            (a >> 1) + (self.n >> 1) + 1
        }
    }

    fn one(&self) -> u64 {
        self.one
    }

    fn zero(&self) -> u64 {
        0
    }

    fn raw(&self, a: u64) -> u128 {
        a as u128
    }
}

/// Full 128x128 -> 256 bit product as (hi, lo).
#[inline]
fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    const MASK: u128 = u64::MAX as u128;
    let (a0, a1) = (a & MASK, a >> 64);
    let (b0, b1) = (b & MASK, b >> 64);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & MASK) + (p10 & MASK);
    let lo = (p00 & MASK) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Mont128 {
    n: u128,
    neg_inv: u128,
    r2: u128,
    one: u128,
}

impl Mont128 {
    /// `n` must be odd and below 2^127.
    pub(crate) fn new(n: u128) -> Self {
        assert!(n % 2 == 1 && n > 1 && n < (1 << 127));
        let mut inv = n;
        for _ in 0..7 {
            inv = inv.wrapping_mul(2u128.wrapping_sub(n.wrapping_mul(inv)));
        }
        debug_assert_eq!(n.wrapping_mul(inv), 1);
        let r = ((u128::MAX % n) + 1) % n;
        let mut r2 = r;
        for _ in 0..128 {
            r2 <<= 1;
            if r2 >= n {
                r2 -= n;
            }
        }
        Self {
            n,
            neg_inv: inv.wrapping_neg(),
            r2,
            one: r,
        }
    }

    #[inline]
    fn reduce(&self, hi: u128, lo: u128) -> u128 {
        let m = lo.wrapping_mul(self.neg_inv);
        let (mh, ml) = mul_wide(m, self.n);
        let (_, carry) = lo.overflowing_add(ml);
        let r = hi + mh + carry as u128;
        if r >= self.n {
            r - self.n
        } else {
            r
        }
    }
}

impl MontArith for Mont128 {
    type Elem = u128;

    fn modulus(&self) -> u128 {
        self.n
    }

    fn to_mont(&self, x: u128) -> u128 {
        let (hi, lo) = mul_wide(x % self.n, self.r2);
        self.reduce(hi, lo)
    }

    fn from_mont(&self, x: u128) -> u128 {
        self.reduce(0, x)
    }

    #[inline]
    fn mul(&self, a: u128, b: u128) -> u128 {
        let (hi, lo) = mul_wide(a, b);
        self.reduce(hi, lo)
    }

    #[inline]
    fn add(&self, a: u128, b: u128) -> u128 {
        // both < n < 2^127, no overflow
        let s = a + b;
        if s >= self.n {
            s - self.n
        } else {
            s
        }
    }

    #[inline]
    fn sub(&self, a: u128, b: u128) -> u128 {
        if a >= b {
            a - b
        } else {
            a + self.n - b
        }
    }

    #[inline]
    fn half(&self, a: u128) -> u128 {
        if a & 1 == 0 {
            a >> 1
        } else {
            (a + self.n) >> 1
        }
    }

    fn one(&self) -> u128 {
        self.one
    }

    fn zero(&self) -> u128 {
        0
    }

    fn raw(&self, a: u128) -> u128 {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    #[test]
    fn wide_product_matches_bigint() {
        let samples = [
            0u128,
            1,
            u64::MAX as u128,
            u128::MAX,
            (1u128 << 127) - 1,
            0x1234_5678_9abc_def0_1357_9bdf_2468_ace0,
        ];
        for &a in &samples {
            for &b in &samples {
                let (hi, lo) = mul_wide(a, b);
                let got = (BigUint::from(hi) << 128u32) + BigUint::from(lo);
                assert_eq!(got, BigUint::from(a) * BigUint::from(b));
            }
        }
    }

    #[test]
    fn mont64_mul_matches_plain() {
        for n in [3u64, 97, 1_000_000_007, (1 << 61) - 1, u64::MAX - 58] {
            let m = Mont64::new(n);
            for (a, b) in [(2u64, 3u64), (n - 1, n - 1), (12345, 67890 % n), (n / 2, n / 3)] {
                let want = (a as u128 * b as u128 % n as u128) as u128;
                let got = m.from_mont(m.mul(m.to_mont(a as u128), m.to_mont(b as u128)));
                assert_eq!(got, want, "n={n} a={a} b={b}");
                let h = m.from_mont(m.half(m.to_mont(a as u128)));
                assert_eq!(h * 2 % n as u128, a as u128 % n as u128);
            }
        }
    }

    #[test]
    fn mont128_mul_matches_bigint() {
        for n in [
            3u128,
            (1u128 << 89) - 1,
            (1u128 << 127) - 1,
            1361788799550131972374553991985921,
        ] {
            let m = Mont128::new(n);
            for (a, b) in [(2u128, 3u128), (n - 1, n - 1), (n / 7, n / 5), (1 << 100, 12345)] {
                let want = BigUint::from(a) * BigUint::from(b) % BigUint::from(n);
                let got = m.from_mont(m.mul(m.to_mont(a), m.to_mont(b)));
                assert_eq!(BigUint::from(got), want);
            }
        }
    }
}
