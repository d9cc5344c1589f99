//! Free Lie algebras in the Lyndon basis.
//!
//! A Lyndon word `w` stands for its standard bracketing `P_w = [P_u, P_v]`,
//! where `v` is the longest proper Lyndon suffix of `w`. The expansion of
//! `P_w` in `T` is `w` plus lexicographically larger words, which makes the
//! conversion from tensors back to the Lyndon basis a triangular solve.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::Rational;
use crate::lincomb::LinComb;
use crate::tensor::{commutator_terms, Alphabet, Letter, NcPoly, Word};

/// Strictly smaller than every proper suffix.
pub fn is_lyndon(w: &[Letter]) -> bool {
    !w.is_empty() && (1..w.len()).all(|r| w < &w[r..])
}

/// Lyndon words of length `k` in lexicographic order (Duval's generation).
pub fn lyndon_words(alphabet: Alphabet, k: usize) -> Vec<Word> {
    let m = alphabet.size() as Letter;
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    let mut w: Vec<Letter> = vec![1];
    loop {
        if w.len() == k {
            out.push(Word::from_slice(&w));
        }
        let len = w.len();
        while w.len() < k {
            let c = w[w.len() - len];
            w.push(c);
        }
        while w.last() == Some(&m) {
            w.pop();
        }
        match w.last_mut() {
            None => break,
            Some(last) => *last += 1,
        }
    }
    out
}

/// Dimension of the degree-`k` part of the free Lie algebra on `m` generators.
pub fn witt_dimension(m: usize, k: usize) -> usize {
    fn mobius(mut n: usize) -> i64 {
        let mut result = 1;
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                n /= p;
                if n % p == 0 {
                    return 0;
                }
                result = -result;
            }
            p += 1;
        }
        if n > 1 {
            result = -result;
        }
        result
    }
    if k == 0 {
        return 0;
    }
    let total: i64 = (1..=k)
        .filter(|d| k % d == 0)
        .map(|d| mobius(d) * (m as i64).pow((k / d) as u32))
        .sum();
    (total / k as i64) as usize
}

/// `(u, v)` with `w = uv` and `v` the longest proper Lyndon suffix.
pub fn standard_factorization(w: &Word) -> Option<(Word, Word)> {
    let l = w.letters();
    (1..l.len())
        .find(|&i| is_lyndon(&l[i..]))
        .map(|i| (Word::from_slice(&l[..i]), Word::from_slice(&l[i..])))
}

/// Expansion of `P_w` in the tensor algebra.
pub fn expansion(w: &Word) -> LinComb<Word> {
    match standard_factorization(w) {
        None => LinComb::basis(w.clone()),
        Some((u, v)) => commutator_terms(&expansion(&u), &expansion(&v)),
    }
}

pub(crate) fn expand_terms(terms: &LinComb<Word>) -> LinComb<Word> {
    let mut out = LinComb::zero();
    for (w, c) in terms {
        out.add_scaled(&expansion(w), c);
    }
    out
}

/// Writes a Lie polynomial in the Lyndon basis; fails if `p` is not Lie.
pub(crate) fn lyndon_coordinates(p: &LinComb<Word>) -> Result<LinComb<Word>> {
    let mut rest = p.clone();
    let mut out = LinComb::zero();
    while let Some((w, c)) = rest.first().map(|(w, c)| (w.clone(), c.clone())) {
        if !is_lyndon(w.letters()) {
            return Err(Error::NotLie(format!("leading word {w} is not a Lyndon word")));
        }
        rest.add_scaled(&expansion(&w), &-c.clone());
        out.add_term(w, c);
    }
    Ok(out)
}

/// Bracketed form of a Lyndon word, e.g. `[[1,2],3]`.
pub fn bracketing(w: &Word, label: &dyn Fn(Letter) -> String) -> String {
    match standard_factorization(w) {
        None => w.letters().iter().map(|&l| label(l)).collect(),
        Some((u, v)) => format!("[{},{}]", bracketing(&u, label), bracketing(&v, label)),
    }
}

/// Element of the free Lie algebra, stored in the Lyndon basis.
#[derive(Clone, PartialEq, Eq)]
pub struct LieElement {
    alphabet: Alphabet,
    terms: LinComb<Word>,
}

impl LieElement {
    pub fn zero(alphabet: Alphabet) -> Self {
        Self {
            alphabet,
            terms: LinComb::zero(),
        }
    }

    pub fn generator(alphabet: Alphabet, l: Letter) -> Result<Self> {
        alphabet.check_letter(l as usize)?;
        Ok(Self {
            alphabet,
            terms: LinComb::basis(Word::letter(l)),
        })
    }

    /// The basis element `P_w`.
    pub fn lyndon(alphabet: Alphabet, w: Word) -> Result<Self> {
        alphabet.check_word(&w)?;
        if !is_lyndon(w.letters()) {
            return Err(Error::NotLie(format!("{w} is not a Lyndon word")));
        }
        Ok(Self {
            alphabet,
            terms: LinComb::basis(w),
        })
    }

    /// Coordinates given directly in the Lyndon basis.
    pub fn from_lyndon_terms(alphabet: Alphabet, terms: LinComb<Word>) -> Result<Self> {
        for w in terms.keys() {
            alphabet.check_word(w)?;
            if !is_lyndon(w.letters()) {
                return Err(Error::NotLie(format!("{w} is not a Lyndon word")));
            }
        }
        Ok(Self { alphabet, terms })
    }

    /// Recognizes a Lie polynomial given in the word basis.
    pub fn from_tensor(p: &NcPoly) -> Result<Self> {
        Ok(Self {
            alphabet: p.alphabet(),
            terms: lyndon_coordinates(p.terms())?,
        })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn terms(&self) -> &LinComb<Word> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(Word::len);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn embed(&self) -> NcPoly {
        NcPoly::from_terms_unchecked(self.alphabet, expand_terms(&self.terms))
    }

    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.alphabet.same_as(&other.alphabet)?;
        let t = commutator_terms(&expand_terms(&self.terms), &expand_terms(&other.terms));
        Ok(Self {
            alphabet: self.alphabet,
            terms: lyndon_coordinates(&t)?,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.alphabet.same_as(&other.alphabet)?;
        Ok(Self {
            alphabet: self.alphabet,
            terms: self.terms.sum(&other.terms),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.alphabet.same_as(&other.alphabet)?;
        Ok(Self {
            alphabet: self.alphabet,
            terms: self.terms.difference(&other.terms),
        })
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        Self {
            alphabet: self.alphabet,
            terms: self.terms.scaled(c),
        }
    }

    pub fn format_with(&self, label: &dyn Fn(Letter) -> String) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(w, c)| format!("{}*{}", crate::linalg::format_rational(c), bracketing(w, label)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(&|l| l.to_string()))
    }
}

impl fmt::Debug for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieElement({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, SparseVector, span_dimension};
    use proptest::prelude::*;
    use std::collections::HashMap;

    fn brute_lyndon(alphabet: Alphabet, k: usize) -> Vec<Word> {
        crate::tensor::words_of_length(alphabet, k)
            .into_iter()
            .filter(|w| {
                let l = w.letters();
                (1..l.len()).all(|r| l < &[&l[r..], &l[..r]].concat()[..])
            })
            .collect()
    }

    fn gen(a: Alphabet, l: Letter) -> LieElement {
        LieElement::generator(a, l).unwrap()
    }

    #[test]
    fn lyndon_enumeration_matches_brute_force_and_witt() {
        for m in 1..=4 {
            let a = Alphabet::new(m).unwrap();
            for k in 1..=6 {
                let fast = lyndon_words(a, k);
                assert_eq!(fast, brute_lyndon(a, k), "m={m} k={k}");
                assert_eq!(fast.len(), witt_dimension(m, k));
            }
        }
        assert_eq!(witt_dimension(4, 3), 20);
    }

    #[test]
    fn bracket_examples() {
        let a = Alphabet::new(4).unwrap();
        let b = gen(a, 1).bracket(&gen(a, 3)).unwrap();
        assert_eq!(b, LieElement::lyndon(a, Word::from_slice(&[1, 3])).unwrap());
        assert!(b.bracket(&b).unwrap().is_zero());
        let swapped = gen(a, 3).bracket(&gen(a, 1)).unwrap();
        assert_eq!(swapped, b.scaled(&int(-1)));
    }

    #[test]
    fn embed_examples() {
        let a = Alphabet::new(3).unwrap();
        assert_eq!(gen(a, 1).embed(), NcPoly::generator(a, 1).unwrap());
        let x12 = gen(a, 1).bracket(&gen(a, 2)).unwrap();
        let expected: LinComb<Word> = [(Word::from_slice(&[1, 2]), int(1)), (Word::from_slice(&[2, 1]), int(-1))].into_iter().collect();
        assert_eq!(x12.embed().terms(), &expected);
        let t = x12.bracket(&gen(a, 3)).unwrap().embed();
        let expected: LinComb<Word> = [
            (Word::from_slice(&[1, 2, 3]), int(1)),
            (Word::from_slice(&[2, 1, 3]), int(-1)),
            (Word::from_slice(&[3, 1, 2]), int(-1)),
            (Word::from_slice(&[3, 2, 1]), int(1)),
        ]
        .into_iter()
        .collect();
        assert_eq!(t.terms(), &expected);
    }

    #[test]
    fn embedding_is_injective_on_lyndon_basis() {
        let a = Alphabet::new(4).unwrap();
        for k in 1..=5 {
            let words = lyndon_words(a, k);
            let mut index = HashMap::new();
            let exps: Vec<LinComb<Word>> = words.iter().map(expansion).collect();
            for e in &exps {
                for w in e.keys() {
                    let next = index.len();
                    index.entry(w.clone()).or_insert(next);
                }
            }
            let vecs: Vec<SparseVector> = exps
                .iter()
                .map(|e| SparseVector::from_entries(index.len(), e.iter().map(|(w, c)| (index[w], c.clone()))).unwrap())
                .collect();
            assert_eq!(span_dimension(&vecs).unwrap(), words.len());
        }
    }

    #[test]
    fn non_lie_is_rejected() {
        let a = Alphabet::new(2).unwrap();
        assert!(LieElement::from_tensor(&NcPoly::word(a, Word::from_slice(&[1, 2])).unwrap()).is_err());
        assert!(LieElement::lyndon(a, Word::from_slice(&[2, 1])).is_err());
    }

    fn arb_lie(m: usize, max_len: usize) -> impl Strategy<Value = LieElement> {
        let a = Alphabet::new(m).unwrap();
        let words: Vec<Word> = (1..=max_len).flat_map(|k| lyndon_words(a, k)).collect();
        proptest::collection::vec((proptest::sample::select(words), -3i64..=3), 1..4).prop_map(move |ts| {
            LieElement::from_lyndon_terms(a, ts.into_iter().map(|(w, c)| (w, int(c))).collect()).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn lie_identities(x in arb_lie(4, 2), y in arb_lie(4, 2), z in arb_lie(4, 2)) {
            let j = x.bracket(&y.bracket(&z).unwrap()).unwrap()
                .add(&y.bracket(&z.bracket(&x).unwrap()).unwrap()).unwrap()
                .add(&z.bracket(&x.bracket(&y).unwrap()).unwrap()).unwrap();
            prop_assert!(j.is_zero());
            prop_assert_eq!(x.bracket(&y).unwrap(), y.bracket(&x).unwrap().scaled(&int(-1)));
            let lhs = x.bracket(&y).unwrap().embed();
            let rhs = x.embed().bracket(&y.embed()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
