mod common;

use intcx::convolution::*;
use intcx::{Error, INFINITY};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn packed_matches_brute_on_random_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..1000 {
        let u = [1u8, 7, 60][case % 3];
        let (a, b) = common::random_pair(&mut rng, 512, u);
        assert_eq!(minplus_packed(&a, &b).unwrap(), minplus_brute(&a, &b).unwrap(), "case {case}");
    }
}

#[test]
fn all_infinite_and_single_entries() {
    let inf = BoundedSeq::new(vec![INFINITY; 5]);
    let one = BoundedSeq::new(vec![3]);
    let c = minplus_packed(&inf, &one).unwrap();
    assert_eq!(c.entries(), &[INFINITY; 5]);
    let c = minplus_packed(&one, &one).unwrap();
    assert_eq!(c.entries(), &[6]);
    let big = BoundedSeq::new(vec![200]);
    assert!(matches!(minplus_packed(&big, &big), Err(Error::ValueOverflow { .. })));
}

fn naive_product(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut c = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    c
}

proptest! {
    #[test]
    fn poly_multiply_matches_schoolbook(
        a in prop::collection::vec(0u64..1 << 20, 1..300),
        b in prop::collection::vec(0u64..1 << 20, 1..300),
    ) {
        prop_assert_eq!(poly_multiply(&a, &b).unwrap(), naive_product(&a, &b));
    }

    #[test]
    fn poly_multiply_commutes(
        a in prop::collection::vec(0u64..1000, 1..200),
        b in prop::collection::vec(0u64..1000, 1..200),
    ) {
        prop_assert_eq!(poly_multiply(&a, &b).unwrap(), poly_multiply(&b, &a).unwrap());
    }

    #[test]
    fn shift_distributes(
        a in prop::collection::vec(0u64..1000, 1..100),
        b in prop::collection::vec(0u64..1000, 1..100),
        s in 0usize..50,
    ) {
        let mut shifted = vec![0u64; s];
        shifted.extend_from_slice(&a);
        let plain = poly_multiply(&a, &b).unwrap();
        let moved = poly_multiply(&shifted, &b).unwrap();
        prop_assert!(moved[..s].iter().all(|&x| x == 0));
        prop_assert_eq!(&moved[s..], &plain[..]);
    }

    #[test]
    fn minplus_commutes_and_shifts(
        a in prop::collection::vec(0u8..=30, 1..300),
        b in prop::collection::vec(0u8..=30, 1..300),
        k in 0u8..=20,
    ) {
        let (sa, sb) = (BoundedSeq::new(a.clone()), BoundedSeq::new(b));
        let ab = minplus_packed(&sa, &sb).unwrap();
        prop_assert_eq!(&ab, &minplus_packed(&sb, &sa).unwrap());
        // adding k to every entry of a adds k to every output
        let lifted = BoundedSeq::new(a.iter().map(|&x| x + k).collect());
        let c = minplus(&lifted, &sb).unwrap();
        let want: Vec<u8> = ab.entries().iter().map(|&x| x + k).collect();
        prop_assert_eq!(c.entries(), &want[..]);
    }
}
