//! Seeded random sampling of words and matrices for the property suites and
//! the self-test command. All sampling is driven by an explicitly seeded
//! ChaCha8 generator so every run is reproducible from the printed seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactmat::BigIntMatrix;
use crate::genwords::{evaluate, Atom, Word};
use crate::presentation::HatGen;

/// Seed used by the pinned test suites and the CLI default.
pub const DEFAULT_SEED: u64 = 42;

/// Name of the generator, printed in reports.
pub const RNG_NAME: &str = "chacha8";

/// Deterministic generator from a 64-bit seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random word in the level-d elementary subgroup: `len` atoms
/// e(i,j)^(d·s) with s ∈ {−2,−1,1,2}. Its evaluation lies in the level-d
/// congruence subgroup.
pub fn random_level_word(rng: &mut ChaCha8Rng, n: usize, d: u64, len: usize) -> Word {
    assert!(n >= 2, "need n ≥ 2");
    let mut w = Word::empty(n);
    for _ in 0..len {
        let (i, j) = random_offdiag(rng, n);
        let s = *[-2i64, -1, 1, 2].get(rng.gen_range(0..4)).unwrap();
        w.push(Atom::elem(i, j, s * d as i64));
    }
    w
}

/// Evaluation of [`random_level_word`]: a random member of the level-d
/// congruence subgroup.
pub fn random_member(rng: &mut ChaCha8Rng, n: usize, d: u64, len: usize) -> BigIntMatrix {
    evaluate(&random_level_word(rng, n, d, len))
}

/// Random element of SL(n;ℤ) as a short product of elementary matrices
/// with exponents in {−3,…,3} \ {0}; used to conjugate test inputs.
pub fn random_sl_element(rng: &mut ChaCha8Rng, n: usize, len: usize) -> BigIntMatrix {
    let mut w = Word::empty(n);
    for _ in 0..len {
        let (i, j) = random_offdiag(rng, n);
        let s = loop {
            let s = rng.gen_range(-3i64..=3);
            if s != 0 {
                break s;
            }
        };
        w.push(Atom::elem(i, j, s));
    }
    evaluate(&w)
}

/// Random word over the GL-side presentation alphabet {E(i,j)^±1, F(k)}
/// with an even number of flips, so its evaluation has determinant 1.
pub fn random_hat_word(rng: &mut ChaCha8Rng, n: usize, len: usize) -> Vec<HatGen> {
    let mut w = Vec::with_capacity(len + 1);
    let mut flips = 0usize;
    for _ in 0..len {
        if rng.gen_bool(0.3) {
            w.push(HatGen::F {
                k: rng.gen_range(1..=n),
            });
            flips += 1;
        } else {
            let (i, j) = random_offdiag(rng, n);
            let pow = if rng.gen_bool(0.5) { 1 } else { -1 };
            w.push(HatGen::E { i, j, pow });
        }
    }
    if flips % 2 == 1 {
        w.push(HatGen::F {
            k: rng.gen_range(1..=n),
        });
    }
    w
}

fn random_offdiag(rng: &mut ChaCha8Rng, n: usize) -> (usize, usize) {
    let i = rng.gen_range(1..=n);
    let j = loop {
        let j = rng.gen_range(1..=n);
        if j != i {
            break j;
        }
    };
    (i, j)
}
