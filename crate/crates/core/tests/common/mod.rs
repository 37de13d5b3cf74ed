#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toeplitz_inverse::ToeplitzTridiagonal;

/// `(a, b)` pairs covering both signs of `x` and of `b`.
pub const FIXTURES: [(f64, f64); 5] = [(3.0, 1.0), (4.0, 1.0), (4.0, -1.0), (-3.0, 1.0), (2.5, 1.0)];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vec(n: usize, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    (0..n).map(|_| r.random_range(-1.0..1.0)).collect()
}

pub fn matrix(a: f64, b: f64, n: usize) -> ToeplitzTridiagonal {
    ToeplitzTridiagonal::new(a, b, n).expect("valid fixture")
}

/// Distance in units in the last place, through the ordered integer image.
pub fn ulp_diff(x: f64, y: f64) -> u64 {
    fn key(v: f64) -> i64 {
        let bits = v.to_bits() as i64;
        if bits < 0 {
            i64::MIN - bits
        } else {
            bits
        }
    }
    key(x).abs_diff(key(y))
}

/// `|x - y|` measured in ulps of `y`.
pub fn rel_ulps(x: f64, y: f64) -> f64 {
    let ulp = f64::EPSILON * y.abs().max(f64::MIN_POSITIVE);
    (x - y).abs() / ulp
}

pub fn rel_sup(x: &[f64], y: &[f64]) -> f64 {
    toeplitz_inverse::cli::rel_sup_diff(x, y)
}
