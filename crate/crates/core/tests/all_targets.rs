use intcx::all_targets::{compute_table, compute_table_traced, naive_oracle, Engine};
use intcx::bounds::{lower_bound, upper_bound};
use intcx::Limits;
use proptest::prelude::*;

const ENGINES: [Engine; 3] = [Engine::Brute, Engine::Capped, Engine::Packed];

#[test]
fn every_engine_matches_oracle_up_to_5000() {
    let l = Limits::default();
    let oracle = naive_oracle(5000).unwrap();
    for e in ENGINES {
        let t = compute_table(5000, &l, e).unwrap();
        assert_eq!(t.values(), oracle.values(), "{e:?}");
    }
}

#[test]
fn engines_agree_at_ten_thousand() {
    let l = Limits::default();
    let brute = compute_table(10_000, &l, Engine::Brute).unwrap();
    for e in [Engine::Capped, Engine::Packed] {
        assert_eq!(compute_table(10_000, &l, e).unwrap().values(), brute.values());
    }
}

#[test]
fn capped_matches_brute_and_oracle_at_1e5() {
    let l = Limits::default();
    let oracle = naive_oracle(100_000).unwrap();
    let brute = compute_table(100_000, &l, Engine::Brute).unwrap();
    let capped = compute_table(100_000, &l, Engine::Capped).unwrap();
    assert_eq!(brute.values(), oracle.values());
    assert_eq!(capped.values(), oracle.values());
}

#[test]
fn values_within_bounds() {
    let l = Limits::default();
    let t = compute_table(100_000, &l, Engine::Capped).unwrap();
    assert_eq!(t.get(1), 1);
    for n in 2..=100_000usize {
        let v = t.get(n);
        assert!(lower_bound(n as u128) <= v, "n = {n}");
        assert!(v as u16 <= upper_bound(n as u128, &l).unwrap(), "n = {n}");
    }
}

#[test]
fn every_additive_pair_meets_exactly_one_merge() {
    // With the larger addend in the window and the smaller one in the prefix,
    // the pair (n - i, i) is applied only at the node splitting n - i from n.
    let n = 5000usize;
    let (_, trace) = compute_table_traced(n, &Limits::default(), Engine::Brute).unwrap();
    let mut hits = vec![0u8; (n + 1) * (n / 2 + 1)];
    let idx = |v: usize, i: usize| v * (n / 2 + 1) + i;
    for rec in &trace {
        for x in rec.l..=rec.m {
            let lo = (rec.m + 1 - x).max(1);
            let hi = rec.prefix_len.min(rec.r - x).min(x);
            for y in lo..=hi {
                hits[idx(x + y, y)] += 1;
            }
        }
    }
    for v in 2..=n {
        for i in 1..=v / 2 {
            assert_eq!(hits[idx(v, i)], 1, "pair ({}, {i})", v - i);
        }
    }
}

#[test]
fn merges_write_only_above_the_window() {
    let (_, trace) = compute_table_traced(3000, &Limits::default(), Engine::Capped).unwrap();
    for rec in trace {
        assert!(rec.l <= rec.m && rec.m < rec.r);
        assert!(rec.prefix_len <= rec.m);
    }
}

#[test]
fn addendum_limit_covers_minimal_witnesses() {
    let l = Limits::default();
    let t = naive_oracle(100_000).unwrap();
    let f = t.values();
    for n in 2..=100_000usize {
        let best_mul = (2..)
            .take_while(|j| j * j <= n)
            .filter(|j| n % j == 0)
            .map(|j| f[j - 1] + f[n / j - 1])
            .min();
        if best_mul == Some(f[n - 1]) {
            continue;
        }
        let i = (1..=n / 2)
            .find(|&i| f[i - 1] + f[n - i - 1] == f[n - 1])
            .unwrap();
        assert!(i as u64 <= intcx::bounds::addendum_limit(n as u128, &l), "n = {n}, i = {i}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn engines_agree_on_random_sizes(n in 1usize..3000) {
        let l = Limits::default();
        let oracle = naive_oracle(n).unwrap();
        for e in ENGINES {
            let t = compute_table(n, &l, e).unwrap();
            prop_assert_eq!(t.values(), oracle.values());
        }
    }

    #[test]
    fn prefix_of_a_table_is_the_smaller_table(n in 2usize..2000, k in 1usize..2000) {
        let k = k.min(n);
        let l = Limits::default();
        let big = compute_table(n, &l, Engine::Capped).unwrap();
        let small = compute_table(k, &l, Engine::Capped).unwrap();
        prop_assert_eq!(&big.values()[..k], small.values());
    }
}
