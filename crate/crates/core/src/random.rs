//! Seeded random elements for property checks and cocycle verification.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cyclic::{BiCyclicPoly, NecklacePair};
use crate::derivation::{DerBasisElem, Derivation};
use crate::lincomb::LinComb;
use crate::linalg::int;
use crate::tensor::{Alphabet, Word};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nonzero integer in `[-3, 3]`.
fn coefficient<R: Rng>(rng: &mut R) -> i64 {
    let c = rng.gen_range(1..=3);
    if rng.gen_bool(0.5) {
        c
    } else {
        -c
    }
}

pub fn random_word<R: Rng>(rng: &mut R, alphabet: Alphabet, len: usize) -> Word {
    let letters: Vec<u8> = (0..len).map(|_| rng.gen_range(1..=alphabet.size()) as u8).collect();
    Word::from_slice(&letters)
}

/// Homogeneous derivation of degree `k` with at most `max_terms` terms; nonzero
/// whenever `max_terms > 0`.
pub fn random_derivation<R: Rng>(rng: &mut R, alphabet: Alphabet, k: i64, max_terms: usize) -> Derivation {
    let len = (k + 1).max(0) as usize;
    let count = rng.gen_range(1..=max_terms.max(1));
    let mut terms = LinComb::zero();
    while terms.is_empty() {
        for _ in 0..count {
            let dual = rng.gen_range(1..=alphabet.size()) as u8;
            let e = DerBasisElem::new(dual, random_word(rng, alphabet, len));
            terms.add_term(e, int(coefficient(rng)));
        }
    }
    Derivation::from_terms(alphabet, terms).expect("letters drawn from the alphabet")
}

/// `count` pairs of homogeneous derivations with degrees drawn from
/// `-1..=max_degree` each; a fixed seed gives a fixed list.
pub fn random_pairs(seed: u64, alphabet: Alphabet, max_degree: i64, count: usize) -> Vec<(Derivation, Derivation)> {
    let mut rng = seeded(seed);
    (0..count)
        .map(|_| {
            let p = rng.gen_range(-1..=max_degree);
            let q = rng.gen_range(-1..=max_degree);
            let d1 = random_derivation(&mut rng, alphabet, p, 3);
            (d1, random_derivation(&mut rng, alphabet, q, 3))
        })
        .collect()
}

/// Element of `|T|⊗|T|` with up to `max_len` letters per factor.
pub fn random_bicyclic<R: Rng>(rng: &mut R, alphabet: Alphabet, max_len: usize, max_terms: usize) -> BiCyclicPoly {
    let mut out = BiCyclicPoly::zero();
    for _ in 0..rng.gen_range(1..=max_terms.max(1)) {
        let (ll, rl) = (rng.gen_range(0..=max_len), rng.gen_range(0..=max_len));
        let l = random_word(rng, alphabet, ll);
        let r = random_word(rng, alphabet, rl);
        out.add_term(NecklacePair::new(&l, &r), int(coefficient(rng)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_and_homogeneous() {
        let a = Alphabet::new(3).unwrap();
        let x = random_derivation(&mut seeded(7), a, 2, 4);
        let y = random_derivation(&mut seeded(7), a, 2, 4);
        assert_eq!(x, y);
        assert_eq!(x.homogeneous_degree(), Some(2));
        assert_eq!(random_derivation(&mut seeded(1), a, -1, 2).homogeneous_degree(), Some(-1));
        assert_eq!(random_pairs(5, a, 3, 10), random_pairs(5, a, 3, 10));
    }
}
