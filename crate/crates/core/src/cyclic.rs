//! Cyclic words: the abelianization `|T| = T/[T,T]` and its tensor square.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::tensor::{words_of_length, Alphabet, Letter, NcPoly, PairTensor, Word};

/// Offset of the lexicographically least rotation (Booth's algorithm).
pub fn least_rotation(s: &[Letter]) -> usize {
    let n = s.len();
    if n < 2 {
        return 0;
    }
    let at = |i: usize| s[i % n];
    let mut fail = vec![-1isize; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let sj = at(j);
        let mut i = fail[j - k - 1];
        while i != -1 && sj != at(k + i as usize + 1) {
            if sj < at(k + i as usize + 1) {
                k = j - i as usize - 1;
            }
            i = fail[i as usize];
        }
        if i == -1 && sj != at(k) {
            if sj < at(k) {
                k = j;
            }
            fail[j - k] = -1;
        } else {
            fail[j - k] = i + 1;
        }
    }
    k % n
}

pub fn canonical_rotation(w: &Word) -> Word {
    w.rotate(least_rotation(w.letters()))
}

/// A cyclic word, stored as its least rotation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Necklace(Word);

impl Necklace {
    pub fn new(w: &Word) -> Self {
        Necklace(canonical_rotation(w))
    }

    pub fn unit() -> Self {
        Necklace(Word::empty())
    }

    pub fn representative(&self) -> &Word {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<&[Letter]> for Necklace {
    fn from(letters: &[Letter]) -> Self {
        Necklace::new(&Word::from_slice(letters))
    }
}

impl fmt::Display for Necklace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}|", self.0)
    }
}

impl fmt::Debug for Necklace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Necklace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('|')
            .and_then(|t| t.strip_suffix('|'))
            .ok_or_else(|| Error::Parse(format!("invalid necklace {s:?}")))?;
        Ok(Necklace::new(&inner.parse()?))
    }
}

impl Serialize for Necklace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A basis element `|u| ⊗ |v|` of `|T| ⊗ |T|`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NecklacePair(pub Necklace, pub Necklace);

impl NecklacePair {
    pub fn new(left: &Word, right: &Word) -> Self {
        NecklacePair(Necklace::new(left), Necklace::new(right))
    }

    pub fn swapped(&self) -> Self {
        NecklacePair(self.1.clone(), self.0.clone())
    }

    pub fn degree(&self) -> usize {
        self.0.len() + self.1.len()
    }
}

impl fmt::Display for NecklacePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*{}", self.0, self.1)
    }
}

impl fmt::Debug for NecklacePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for NecklacePair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (l, r) = s
            .split_once("|*|")
            .ok_or_else(|| Error::Parse(format!("invalid necklace pair {s:?}")))?;
        Ok(NecklacePair(format!("{l}|").parse()?, format!("|{r}").parse()?))
    }
}

impl Serialize for NecklacePair {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// An element of `|T(A_n)|`.
pub type CyclicPoly = LinComb<Necklace>;

/// An element of `|T(A_n)| ⊗ |T(A_n)|`.
pub type BiCyclicPoly = LinComb<NecklacePair>;

/// The canonical projection `π : T → |T|`.
pub fn project(p: &NcPoly) -> CyclicPoly {
    p.terms().map_keys(Necklace::new)
}

/// `π ⊗ π : T ⊗ T → |T| ⊗ |T|`.
pub fn project_pair(t: &PairTensor) -> BiCyclicPoly {
    t.map_keys(|(u, v)| NecklacePair::new(u, v))
}

/// The switch `σ(|u| ⊗ |v|) = |v| ⊗ |u|`.
pub fn switch(b: &BiCyclicPoly) -> BiCyclicPoly {
    b.map_keys(NecklacePair::swapped)
}

/// Necklaces of length `k`, in increasing order.
pub fn necklaces(alphabet: Alphabet, k: usize) -> Vec<Necklace> {
    words_of_length(alphabet, k)
        .into_iter()
        .filter(|w| least_rotation(w.letters()) == 0 || canonical_rotation(w) == *w)
        .map(Necklace)
        .collect()
}

/// Basis of the total-degree-`d` part of `|T| ⊗ |T|`, in increasing order.
pub fn bicyclic_basis(alphabet: Alphabet, d: usize) -> Vec<NecklacePair> {
    let mut out = Vec::new();
    for left in 0..=d {
        let rights = necklaces(alphabet, d - left);
        for l in necklaces(alphabet, left) {
            for r in &rights {
                out.push(NecklacePair(l.clone(), r.clone()));
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;
    use crate::tensor::NcPoly;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn brute_force_least(s: &[Letter]) -> Word {
        let w = Word::from_slice(s);
        (0..s.len().max(1)).map(|r| w.rotate(r)).min_by(|a, b| a.letters().cmp(b.letters())).unwrap()
    }

    #[test]
    fn rotations_share_a_necklace() {
        assert_eq!(Necklace::new(&w("1.2.3")), Necklace::new(&w("2.3.1")));
        assert_eq!(Necklace::new(&w("1.2.3")), Necklace::new(&w("3.1.2")));
        assert_ne!(Necklace::new(&w("1.2.3")), Necklace::new(&w("1.3.2")));
    }

    #[test]
    fn commutators_project_to_zero() {
        let a = Alphabet::new(3).unwrap();
        let x1 = NcPoly::word(a, w("1")).unwrap();
        let x23 = NcPoly::word(a, w("2.3")).unwrap();
        assert!(project(&x1.bracket(&x23).unwrap()).is_zero());
    }

    #[test]
    fn switch_examples() {
        let b = BiCyclicPoly::basis(NecklacePair::new(&w("1"), &Word::empty()));
        assert_eq!(switch(&b), BiCyclicPoly::basis(NecklacePair::new(&Word::empty(), &w("1"))));
        let b = BiCyclicPoly::basis(NecklacePair::new(&w("1.2"), &w("3")));
        assert_eq!(switch(&b), BiCyclicPoly::basis(NecklacePair::new(&w("3"), &w("1.2"))));
    }

    #[test]
    fn formats() {
        let p = NecklacePair::new(&w("2.1"), &w("3"));
        assert_eq!(p.to_string(), "|1.2|*|3|");
        assert_eq!(p.to_string().parse::<NecklacePair>().unwrap(), p);
        assert_eq!(Necklace::unit().to_string(), "|e|");
        assert_eq!("|e|*|e|".parse::<NecklacePair>().unwrap(), NecklacePair::default());
    }

    #[test]
    fn necklace_counts() {
        // classical necklace numbers for 2 and 3 colours
        let a2 = Alphabet::new(2).unwrap();
        let a3 = Alphabet::new(3).unwrap();
        let counts2: Vec<usize> = (0..=6).map(|k| necklaces(a2, k).len()).collect();
        assert_eq!(counts2, vec![1, 2, 3, 4, 6, 8, 14]);
        let counts3: Vec<usize> = (0..=4).map(|k| necklaces(a3, k).len()).collect();
        assert_eq!(counts3, vec![1, 3, 6, 11, 24]);
        assert_eq!(bicyclic_basis(a3, 2).len(), 6 + 9 + 6);
    }

    proptest! {
        #[test]
        fn booth_matches_brute_force(s in proptest::collection::vec(1u8..=3, 0..10)) {
            let c = canonical_rotation(&Word::from_slice(&s));
            prop_assert_eq!(c.clone(), brute_force_least(&s));
            prop_assert_eq!(canonical_rotation(&c), c);
        }

        #[test]
        fn projection_is_rotation_invariant(s in proptest::collection::vec(1u8..=3, 1..8), r in 0usize..8) {
            let w = Word::from_slice(&s);
            prop_assert_eq!(Necklace::new(&w), Necklace::new(&w.rotate(r)));
        }

        #[test]
        fn projection_kills_commutators(
            p in crate::tensor::tests::arb_poly(3, 3),
            q in crate::tensor::tests::arb_poly(3, 3),
        ) {
            prop_assert!(project(&p.bracket(&q).unwrap()).is_zero());
            let sum = p.add(&q).unwrap();
            let mut lin = project(&p);
            lin.add_assign_ref(&project(&q));
            prop_assert_eq!(project(&sum), lin);
        }

        #[test]
        fn switch_is_involution(pairs in proptest::collection::vec(
            (proptest::collection::vec(1u8..=3, 0..4), proptest::collection::vec(1u8..=3, 0..4), -3i64..=3), 0..6)) {
            let b: BiCyclicPoly = pairs.iter()
                .map(|(l, r, c)| (NecklacePair::new(&Word::from_slice(l), &Word::from_slice(r)), int(*c)))
                .collect();
            prop_assert_eq!(switch(&switch(&b)), b);
        }
    }
}
