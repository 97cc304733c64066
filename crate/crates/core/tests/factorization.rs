mod common;

use intcx::factorization::*;
use proptest::prelude::*;

#[test]
fn is_prime_matches_sieve_to_one_million() {
    let flags = common::prime_flags(1_000_000);
    for (n, &p) in flags.iter().enumerate() {
        assert_eq!(is_prime(n as u128), p, "n = {n}");
    }
    let spf = build_spf(1_000_000).unwrap();
    for n in 2..=1_000_000usize {
        assert_eq!(spf.is_prime(n), flags[n], "spf n = {n}");
    }
}

#[test]
fn divisor_sources_agree() {
    let n = 100_000;
    let lists = divisor_sieve(n).unwrap();
    let spf = build_spf(n).unwrap();
    for k in 2..=n {
        let from_lists: Vec<u128> = lists.get(k).iter().map(|&d| d as u128).collect();
        let from_factors = factorize(k as u128).divisors();
        let from_spf: Vec<u128> = divisors_of(k, &spf).unwrap().into_iter().map(|d| d as u128).collect();
        assert_eq!(from_lists, from_factors, "k = {k}");
        assert_eq!(from_spf, from_factors, "k = {k}");
        assert_eq!(factorize(k as u128), factorize_trial(k as u128), "k = {k}");
    }
}

#[test]
fn known_large_values() {
    // Mersenne primes and products of large primes
    assert!(is_prime((1u128 << 61) - 1));
    assert!(is_prime((1u128 << 89) - 1));
    assert!(is_prime((1u128 << 107) - 1));
    assert!(!is_prime((1u128 << 67) - 1));
    let f = factorize((1u128 << 67) - 1);
    assert_eq!(f.pairs(), &[(193_707_721, 1), (761_838_257_287, 1)]);
    let p = (1u128 << 61) - 1;
    let q = (1u128 << 31) - 1;
    assert_eq!(factorize(p * q).pairs(), &[(q, 1), (p, 1)]);
    // 3215031751 is a strong pseudoprime to bases 2, 3, 5, 7
    assert!(!is_prime(3_215_031_751));
    assert_eq!(factorize(379u128.pow(6)).pairs(), &[(379, 6)]);
    assert!(factorize(1 << 100).is_prime_power());
}

proptest! {
    #[test]
    fn factorization_multiplies_back(n in 2u128..(1u128 << 100)) {
        let f = factorize(n);
        prop_assert_eq!(f.value(), Some(n));
        for &(p, _) in f.pairs() {
            prop_assert!(is_prime(p));
        }
        prop_assert!(f.pairs().windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn semiprimes_split(a in 1_000_000u64..u32::MAX as u64, b in 1_000_000u64..u32::MAX as u64) {
        let (p, q) = (next_prime(a), next_prime(b));
        let f = factorize(p as u128 * q as u128);
        let mut want = vec![(p.min(q) as u128, 1), (p.max(q) as u128, 1)];
        if p == q {
            want = vec![(p as u128, 2)];
        }
        prop_assert_eq!(f.pairs(), &want[..]);
    }
}

fn next_prime(mut n: u64) -> u64 {
    while !is_prime(n as u128) {
        n += 1;
    }
    n
}
