//! Exact polynomial multiplication and (min,+)-convolution of bounded sequences.
//!
//! [`minplus_packed`] encodes each finite entry `a[i]` as the monomial
//! `x^(B*i + a[i])` with `B = 2u + 1`, multiplies exactly, and reads the
//! smallest occupied exponent of each length-`B` bucket back out. Several
//! indicator coefficients share one transform word as small digits, which
//! shortens the transform by the digit count.

mod ntt;

use crate::{Complexity, Error, Result, INFINITY, MAX_FINITE};

pub use ntt::MODULUS as TRANSFORM_MODULUS;

/// Lengths below this use [`minplus_brute`] in [`minplus`].
pub const PACKED_CUTOFF: usize = 256;

/// Exact integer convolution `c[k] = sum a[j] * b[k - j]`.
///
/// Fails if a coefficient could reach the transform modulus.
pub fn poly_multiply(a: &[u64], b: &[u64]) -> Result<Vec<u64>> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::OutOfRange("poly_multiply needs nonempty inputs".into()));
    }
    let max_a = *a.iter().max().unwrap() as u128;
    let max_b = *b.iter().max().unwrap() as u128;
    let terms = a.len().min(b.len()) as u128;
    let bound = terms
        .checked_mul(max_a)
        .and_then(|x| x.checked_mul(max_b))
        .unwrap_or(u128::MAX);
    if bound >= ntt::MODULUS as u128 {
        return Err(Error::TransformOverflow {
            bound,
            modulus: ntt::MODULUS,
        });
    }
    if a.len().min(b.len()) <= 32 {
        return Ok(schoolbook(a, b));
    }
    Ok(ntt::convolve(a, b))
}

/// A sequence of complexity values whose finite entries are all `<= bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedSeq {
    entries: Vec<Complexity>,
    bound: Complexity,
}

impl BoundedSeq {
    /// Takes the bound from the largest finite entry.
    pub fn new(entries: Vec<Complexity>) -> Self {
        let bound = entries
            .iter()
            .copied()
            .filter(|&v| v != INFINITY)
            .max()
            .unwrap_or(0);
        Self { entries, bound }
    }

    pub fn with_bound(entries: Vec<Complexity>, bound: Complexity) -> Result<Self> {
        if bound > MAX_FINITE {
            return Err(Error::OutOfRange(format!("bound {bound} exceeds {MAX_FINITE}")));
        }
        if let Some(&v) = entries.iter().find(|&&v| v != INFINITY && v > bound) {
            return Err(Error::OutOfRange(format!("entry {v} exceeds bound {bound}")));
        }
        Ok(Self { entries, bound })
    }

    pub fn entries(&self) -> &[Complexity] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complexity> {
        self.entries
    }

    pub fn bound(&self) -> Complexity {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn max_finite(&self) -> Option<Complexity> {
        self.entries.iter().copied().filter(|&v| v != INFINITY).max()
    }
}

fn check_sum_range(a: &BoundedSeq, b: &BoundedSeq) -> Result<()> {
    // Every pair (i, j) is realized in the output, so the largest finite sum
    // is exactly max(a) + max(b).
    if let (Some(x), Some(y)) = (a.max_finite(), b.max_finite()) {
        if x as u16 + y as u16 > MAX_FINITE as u16 {
            return Err(Error::ValueOverflow { max: MAX_FINITE });
        }
    }
    Ok(())
}

/// Schoolbook (min,+)-convolution; the reference for the packed version.
pub fn minplus_brute(a: &BoundedSeq, b: &BoundedSeq) -> Result<BoundedSeq> {
    if a.is_empty() || b.is_empty() {
        return Ok(BoundedSeq::new(Vec::new()));
    }
    check_sum_range(a, b)?;
    let mut c = vec![INFINITY; a.len() + b.len() - 1];
    for (i, &x) in a.entries.iter().enumerate() {
        if x == INFINITY {
            continue;
        }
        for (out, &y) in c[i..].iter_mut().zip(&b.entries) {
            // saturates to 255 whenever y is infinite
            *out = (*out).min(x.saturating_add(y));
        }
    }
    Ok(BoundedSeq::new(c))
}

/// Indicator coefficients of `p(x)` grouped `k` to a word as `bits`-wide
/// digits: word `q` holds coefficients `kq..kq + k`.
struct Digits {
    bits: u32,
    k: usize,
}

impl Digits {
    /// Product digits count pairs, so they stay below `2^bits` when
    /// `max_count < 2^bits`; each product word then has `2k - 1` digits and
    /// must stay below the transform modulus.
    fn new(max_count: usize) -> Self {
        let bits = usize::BITS - max_count.leading_zeros();
        let k = ((63 / bits as usize) + 1) / 2;
        Self { bits, k }
    }

    fn pack(&self, exponents: impl Iterator<Item = usize>, top: usize) -> Vec<u64> {
        let mut words = vec![0u64; top / self.k + 1];
        for e in exponents {
            words[e / self.k] |= 1 << (self.bits as usize * (e % self.k));
        }
        words
    }

    /// Whether the unpacked product has a nonzero coefficient at `e`.
    #[inline]
    fn occupied(&self, words: &[u64], e: usize) -> bool {
        let mask = (1u64 << self.bits) - 1;
        let (q, r) = (e / self.k, e % self.k);
        let digit = |w: u64, d: usize| (w >> (self.bits as usize * d)) & mask;
        (q < words.len() && digit(words[q], r) != 0)
            || (q >= 1 && q - 1 < words.len() && r + self.k < 2 * self.k - 1 && digit(words[q - 1], r + self.k) != 0)
    }
}

/// (min,+)-convolution through one exact polynomial product.
pub fn minplus_packed(a: &BoundedSeq, b: &BoundedSeq) -> Result<BoundedSeq> {
    if a.is_empty() || b.is_empty() {
        return Ok(BoundedSeq::new(Vec::new()));
    }
    check_sum_range(a, b)?;
    let out_len = a.len() + b.len() - 1;
    let u = a.bound.max(b.bound) as usize;
    let base = 2 * u + 1;
    let digits = Digits::new(a.len().min(b.len()));
    let encode = |s: &BoundedSeq| -> Option<Vec<u64>> {
        let last = s.entries.iter().rposition(|&v| v != INFINITY)?;
        let terms = s.entries[..=last]
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != INFINITY)
            .map(|(i, &v)| base * i + v as usize);
        Some(digits.pack(terms, base * last + u))
    };
    let (pa, pb) = match (encode(a), encode(b)) {
        (Some(pa), Some(pb)) => (pa, pb),
        _ => return Ok(BoundedSeq::new(vec![INFINITY; out_len])),
    };
    // Every product digit counts pairs (i, j), at most min(|a|, |b|) of them,
    // so words stay below 2^63 < modulus and no digit carries.
    let prod = if pa.len().min(pb.len()) <= 32 {
        schoolbook(&pa, &pb)
    } else {
        ntt::convolve(&pa, &pb)
    };
    let top = prod.len() * digits.k + digits.k;
    let mut c = vec![INFINITY; out_len];
    for (k, out) in c.iter_mut().enumerate() {
        let start = base * k;
        if start >= top {
            break;
        }
        if let Some(s) = (0..base).find(|&s| digits.occupied(&prod, start + s)) {
            debug_assert!(s <= 2 * u, "bucket overflow at {k}");
            *out = s as Complexity;
        }
    }
    Ok(BoundedSeq::new(c))
}

fn schoolbook(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut c = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    c
}

/// Dispatches to [`minplus_brute`] for short inputs and [`minplus_packed`] otherwise.
pub fn minplus(a: &BoundedSeq, b: &BoundedSeq) -> Result<BoundedSeq> {
    if a.len().min(b.len()) < PACKED_CUTOFF {
        minplus_brute(a, b)
    } else {
        minplus_packed(a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const INF: u8 = INFINITY;

    fn seq(v: &[u8]) -> BoundedSeq {
        BoundedSeq::new(v.to_vec())
    }

    #[test]
    fn poly_examples() {
        assert_eq!(poly_multiply(&[1], &[1]).unwrap(), vec![1]);
        assert_eq!(poly_multiply(&[1, 2], &[3, 4]).unwrap(), vec![3, 10, 8]);
        assert!(poly_multiply(&[], &[1]).is_err());
        assert!(matches!(
            poly_multiply(&[u64::MAX; 4], &[u64::MAX; 4]),
            Err(Error::TransformOverflow { .. })
        ));
    }

    #[test]
    fn poly_ntt_path_matches_schoolbook() {
        let a: Vec<u64> = (0..1000u64).map(|i| (i * 37 + 11) % 100).collect();
        let b: Vec<u64> = (0..1000u64).map(|i| (i * 53 + 7) % 100).collect();
        let mut want = vec![0u64; 1999];
        for i in 0..1000 {
            for j in 0..1000 {
                want[i + j] += a[i] * b[j];
            }
        }
        assert_eq!(poly_multiply(&a, &b).unwrap(), want);
    }

    #[test]
    fn minplus_examples() {
        for f in [minplus_brute, minplus_packed] {
            assert_eq!(f(&seq(&[0]), &seq(&[0])).unwrap().entries(), &[0]);
            assert_eq!(f(&seq(&[0, 1]), &seq(&[0, 2])).unwrap().entries(), &[0, 1, 3]);
            assert_eq!(f(&seq(&[INF, 5]), &seq(&[0, INF])).unwrap().entries(), &[INF, 5, INF]);
            assert_eq!(f(&seq(&[INF, INF]), &seq(&[3, 1, 2])).unwrap().entries(), &[INF; 4]);
        }
    }

    #[test]
    fn minplus_overflow_is_an_error() {
        let a = seq(&[200, INF]);
        let b = seq(&[60]);
        assert!(matches!(minplus_brute(&a, &b), Err(Error::ValueOverflow { .. })));
        assert!(matches!(minplus_packed(&a, &b), Err(Error::ValueOverflow { .. })));
        assert!(minplus_brute(&seq(&[200]), &seq(&[54])).is_ok());
    }

    #[test]
    fn bounded_seq_validation() {
        assert!(BoundedSeq::with_bound(vec![3, INF], 3).is_ok());
        assert!(BoundedSeq::with_bound(vec![4], 3).is_err());
        assert!(BoundedSeq::with_bound(vec![], 255).is_err());
    }
}
