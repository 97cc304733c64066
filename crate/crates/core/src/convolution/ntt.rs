//! Number-theoretic transform over the prime 2^64 - 2^32 + 1.

pub const MODULUS: u64 = 0xffff_ffff_0000_0001;
const EPSILON: u64 = 0xffff_ffff; // 2^64 mod p
const GENERATOR: u64 = 7;
const TWO_ADICITY: u32 = 32;

#[inline]
fn reduce(x: u128) -> u64 {
    let lo = x as u64;
    let hi = (x >> 64) as u64;
    let hi_hi = hi >> 32;
    let hi_lo = hi & EPSILON;
    // 2^96 = -1, 2^64 = 2^32 - 1
    let (mut t0, borrow) = lo.overflowing_sub(hi_hi);
    if borrow {
        t0 = t0.wrapping_sub(EPSILON);
    }
    let t1 = hi_lo * EPSILON;
    let (mut r, carry) = t0.overflowing_add(t1);
    if carry {
        r = r.wrapping_add(EPSILON);
    }
    if r >= MODULUS {
        r - MODULUS
    } else {
        r
    }
}

#[inline]
pub(crate) fn mul(a: u64, b: u64) -> u64 {
    reduce(a as u128 * b as u128)
}

#[inline]
fn add(a: u64, b: u64) -> u64 {
    let (s, c) = a.overflowing_add(b);
    if c || s >= MODULUS {
        s.wrapping_sub(MODULUS)
    } else {
        s
    }
}

#[inline]
fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a.wrapping_sub(b).wrapping_add(MODULUS)
    }
}

fn pow(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        exp >>= 1;
    }
    acc
}

/// Stage tables: the stage with half-length `h` reads `w^j`, `j < h`, from
/// `[h, 2h)`, where `w` is a primitive `2h`-th root of unity (inverted for
/// the inverse transform).
fn twiddles(n: usize, inverse: bool) -> Vec<u64> {
    let mut t = vec![0u64; n.max(2)];
    let mut h = 1;
    while h < n {
        let mut w = pow(GENERATOR, (MODULUS - 1) / (2 * h) as u64);
        if inverse {
            w = pow(w, MODULUS - 2);
        }
        let mut x = 1;
        for slot in &mut t[h..2 * h] {
            *slot = x;
            x = mul(x, w);
        }
        h <<= 1;
    }
    t
}

/// Blocks of this many entries are finished stage by stage while cached.
const BLOCK: usize = 1 << 14;

#[inline]
fn dif_stage(a: &mut [u64], h: usize, tw: &[u64]) {
    let t = &tw[h..2 * h];
    for chunk in a.chunks_exact_mut(2 * h) {
        let (lo, hi) = chunk.split_at_mut(h);
        for ((u, v), &w) in lo.iter_mut().zip(hi.iter_mut()).zip(t) {
            let (x, y) = (*u, *v);
            *u = add(x, y);
            *v = mul(sub(x, y), w);
        }
    }
}

#[inline]
fn dit_stage(a: &mut [u64], h: usize, tw: &[u64]) {
    let t = &tw[h..2 * h];
    for chunk in a.chunks_exact_mut(2 * h) {
        let (lo, hi) = chunk.split_at_mut(h);
        for ((u, v), &w) in lo.iter_mut().zip(hi.iter_mut()).zip(t) {
            let x = *u;
            let y = mul(*v, w);
            *u = add(x, y);
            *v = sub(x, y);
        }
    }
}

/// Decimation in frequency: natural order in, bit-reversed order out.
fn forward(a: &mut [u64], tw: &[u64]) {
    let block = BLOCK.min(a.len());
    let mut h = a.len() / 2;
    while h >= block {
        dif_stage(a, h, tw);
        h >>= 1;
    }
    for chunk in a.chunks_exact_mut(block) {
        let mut h = block / 2;
        while h >= 1 {
            dif_stage(chunk, h, tw);
            h >>= 1;
        }
    }
}

/// Decimation in time: bit-reversed order in, natural order out, unscaled.
fn backward(a: &mut [u64], tw: &[u64]) {
    let block = BLOCK.min(a.len());
    for chunk in a.chunks_exact_mut(block) {
        let mut h = 1;
        while h < block {
            dit_stage(chunk, h, tw);
            h <<= 1;
        }
    }
    let mut h = block;
    while h < a.len() {
        dit_stage(a, h, tw);
        h <<= 1;
    }
}

/// Cyclic-free product of two residue sequences, each entry `< MODULUS`.
pub(crate) fn convolve(a: &[u64], b: &[u64]) -> Vec<u64> {
    let out_len = a.len() + b.len() - 1;
    let size = out_len.next_power_of_two();
    assert!(size.trailing_zeros() <= TWO_ADICITY);
    let mut fa = vec![0u64; size];
    fa[..a.len()].copy_from_slice(a);
    let mut fb = vec![0u64; size];
    fb[..b.len()].copy_from_slice(b);
    let tw = twiddles(size, false);
    forward(&mut fa, &tw);
    forward(&mut fb, &tw);
    let n_inv = pow(size as u64, MODULUS - 2);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = mul(mul(*x, *y), n_inv);
    }
    backward(&mut fa, &twiddles(size, true));
    fa.truncate(out_len);
    fa
}
