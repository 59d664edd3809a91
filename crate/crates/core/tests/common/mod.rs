#![allow(dead_code)]

pub mod oracles;

use quasicone_core::ext::Fin;
use quasicone_core::tropical::{closure, ExtMatrix};
use quasicone_core::QuasiconeMatrix;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// A random valid quasicone: nonnegative entries, closed, rejected unless the
/// diagonal stays at 1, then moved by a random translation.
pub fn random_quasicone(rng: &mut impl Rng, n: usize, spread: i64) -> QuasiconeMatrix {
    let d = n + 1;
    loop {
        let raw = ExtMatrix::from_fn(d, |p, q| {
            if p == q {
                Fin(1)
            } else {
                Fin(rng.gen_range(0..=spread))
            }
        });
        let closed = closure(&raw);
        if (0..d).any(|i| closed[(i, i)] != Fin(1)) {
            continue;
        }
        let m = QuasiconeMatrix::new(n, closed, Fin(1));
        if m.is_valid() {
            return m.translate_action(&random_translation(rng, d));
        }
    }
}

/// A random normal quasicone in canonical form.
pub fn random_normal(rng: &mut impl Rng, n: usize, spread: i64) -> QuasiconeMatrix {
    loop {
        if let Ok(c) = random_quasicone(rng, n, spread).normalize() {
            return c;
        }
    }
}

pub fn random_permutation(rng: &mut impl Rng, d: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..d).collect();
    for i in (1..d).rev() {
        p.swap(i, rng.gen_range(0..=i));
    }
    p
}

pub fn random_translation(rng: &mut impl Rng, d: usize) -> Vec<i64> {
    (0..d).map(|_| rng.gen_range(-6..=6)).collect()
}
