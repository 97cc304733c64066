#![allow(dead_code)]

use intcx::convolution::BoundedSeq;
use intcx::INFINITY;
use rand::Rng;

/// Two sequences of length `1..=max_len` with entries in `0..=u`; about one
/// entry in eight is infinite.
pub fn random_pair<R: Rng>(rng: &mut R, max_len: usize, u: u8) -> (BoundedSeq, BoundedSeq) {
    let one = |rng: &mut R| {
        let len = rng.gen_range(1..=max_len);
        let v: Vec<u8> = (0..len)
            .map(|_| if rng.gen_ratio(1, 8) { INFINITY } else { rng.gen_range(0..=u) })
            .collect();
        BoundedSeq::with_bound(v, u).unwrap()
    };
    (one(rng), one(rng))
}

/// Sieve of Eratosthenes on `0..=n`.
pub fn prime_flags(n: usize) -> Vec<bool> {
    let mut p = vec![true; n + 1];
    p[0] = false;
    if n >= 1 {
        p[1] = false;
    }
    let mut i = 2;
    while i * i <= n {
        if p[i] {
            for k in (i * i..=n).step_by(i) {
                p[k] = false;
            }
        }
        i += 1;
    }
    p
}

pub fn fixture(name: &str) -> String {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/");
    std::fs::read_to_string(format!("{path}{name}")).unwrap()
}

/// `(file, value, ones)` for the stored witness expressions.
pub const FIXTURES: [(&str, &str, u64); 6] = [
    ("733_pow6.txt", "155104303499468569", 119),
    ("379_pow6.txt", "2963706958323721", 107),
    ("739_pow6.txt", "162879576091729561", 119),
    ("541_pow6.txt", "25071688922457241", 113),
    ("577_pow12.txt", "1361788799550131972374553991985921", 227),
    ("811_pow9.txt", "151770612880318395249730891", 179),
];
