//! The free associative algebra `T(A_n)`: words, non-commutative polynomials,
//! the commutator bracket and the partial derivatives `∂_i`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::linalg::Rational;
use crate::lincomb::LinComb;

/// Generator index, 1-based.
pub type Letter = u8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    n: usize,
}

impl Alphabet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > Letter::MAX as usize {
            return Err(Error::InvalidAlphabet(n));
        }
        Ok(Self { n })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        1..=self.n as Letter
    }

    pub fn check_letter(&self, l: usize) -> Result<()> {
        if l == 0 || l > self.n {
            return Err(Error::IndexOutOfRange { index: l, n: self.n });
        }
        Ok(())
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        w.letters().iter().try_for_each(|&l| self.check_letter(l as usize))
    }

    pub(crate) fn same_as(&self, other: &Alphabet) -> Result<()> {
        if self.n != other.n {
            return Err(Error::AlphabetMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }
}

/// A word in the generators. The empty word is the unit.
///
/// Words are ordered by length first, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(SmallVec<[Letter; 12]>);

impl Word {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn letter(l: Letter) -> Self {
        Self(SmallVec::from_slice(&[l]))
    }

    pub fn from_slice(letters: &[Letter]) -> Self {
        Self(SmallVec::from_slice(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Concatenation of three slices, the common shape of a substitution.
    pub(crate) fn splice(prefix: &[Letter], middle: &[Letter], suffix: &[Letter]) -> Word {
        let mut v = SmallVec::with_capacity(prefix.len() + middle.len() + suffix.len());
        v.extend_from_slice(prefix);
        v.extend_from_slice(middle);
        v.extend_from_slice(suffix);
        Word(v)
    }

    /// Rotation moving the first `r` letters to the end.
    pub fn rotate(&self, r: usize) -> Word {
        if self.0.is_empty() {
            return self.clone();
        }
        let r = r % self.0.len();
        Word::splice(&self.0[r..], &self.0[..r], &[])
    }

    pub fn count(&self, l: Letter) -> usize {
        self.0.iter().filter(|&&x| x == l).count()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.as_slice().cmp(other.0.as_slice()))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<&[Letter]> for Word {
    fn from(letters: &[Letter]) -> Self {
        Word::from_slice(letters)
    }
}

impl<const N: usize> From<[Letter; N]> for Word {
    fn from(letters: [Letter; N]) -> Self {
        Word::from_slice(&letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses `"1.2.1"`; `"e"` is the empty word.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "e" {
            return Ok(Word::empty());
        }
        s.split('.')
            .map(|t| {
                t.parse::<Letter>()
                    .ok()
                    .filter(|&l| l > 0)
                    .ok_or_else(|| Error::Parse(format!("invalid word {s:?}")))
            })
            .collect::<Result<SmallVec<_>>>()
            .map(Word)
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// All words of length `k` in lexicographic order.
pub fn words_of_length(alphabet: Alphabet, k: usize) -> Vec<Word> {
    let n = alphabet.size() as Letter;
    let mut out = Vec::with_capacity(alphabet.size().pow(k as u32));
    let mut cur: SmallVec<[Letter; 12]> = SmallVec::from_elem(1, k);
    loop {
        out.push(Word(cur.clone()));
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n {
                cur[i] += 1;
                for x in cur[i + 1..].iter_mut() {
                    *x = 1;
                }
                break;
            }
        }
    }
}

/// An element of `T(A_n)`.
#[derive(Clone, PartialEq, Eq)]
pub struct NcPoly {
    alphabet: Alphabet,
    terms: LinComb<Word>,
}

impl NcPoly {
    pub fn zero(alphabet: Alphabet) -> Self {
        Self {
            alphabet,
            terms: LinComb::zero(),
        }
    }

    pub fn one(alphabet: Alphabet) -> Self {
        Self {
            alphabet,
            terms: LinComb::basis(Word::empty()),
        }
    }

    pub fn word(alphabet: Alphabet, w: Word) -> Result<Self> {
        alphabet.check_word(&w)?;
        Ok(Self {
            alphabet,
            terms: LinComb::basis(w),
        })
    }

    pub fn generator(alphabet: Alphabet, l: Letter) -> Result<Self> {
        Self::word(alphabet, Word::letter(l))
    }

    pub fn from_terms(alphabet: Alphabet, terms: LinComb<Word>) -> Result<Self> {
        terms.keys().try_for_each(|w| alphabet.check_word(w))?;
        Ok(Self { alphabet, terms })
    }

    pub(crate) fn from_terms_unchecked(alphabet: Alphabet, terms: LinComb<Word>) -> Self {
        Self { alphabet, terms }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn terms(&self) -> &LinComb<Word> {
        &self.terms
    }

    pub fn into_terms(self) -> LinComb<Word> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn coeff(&self, w: &Word) -> Rational {
        self.terms.coeff(w)
    }

    pub fn homogeneous_part(&self, k: usize) -> Self {
        Self {
            alphabet: self.alphabet,
            terms: self.terms.filter(|w| w.len() == k),
        }
    }

    /// `Some(k)` when every term has length `k`; the zero polynomial has no degree.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut lens = self.terms.keys().map(Word::len);
        let first = lens.next()?;
        lens.all(|l| l == first).then_some(first)
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

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.alphabet.same_as(&other.alphabet)?;
        Ok(Self {
            alphabet: self.alphabet,
            terms: multiply_terms(&self.terms, &other.terms),
        })
    }

    /// The commutator `pq − qp`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.alphabet.same_as(&other.alphabet)?;
        Ok(Self {
            alphabet: self.alphabet,
            terms: commutator_terms(&self.terms, &other.terms),
        })
    }
}

impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.terms, f)
    }
}

impl fmt::Debug for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NcPoly[n={}]({})", self.alphabet.size(), self.terms)
    }
}

pub(crate) fn multiply_terms(p: &LinComb<Word>, q: &LinComb<Word>) -> LinComb<Word> {
    let mut out = LinComb::zero();
    for (u, a) in p {
        for (v, b) in q {
            out.add_term(u.concat(v), a * b);
        }
    }
    out
}

pub(crate) fn commutator_terms(p: &LinComb<Word>, q: &LinComb<Word>) -> LinComb<Word> {
    let mut out = multiply_terms(p, q);
    out.sub_assign_ref(&multiply_terms(q, p));
    out
}

/// A linear combination of `u ⊗ v` with `u, v` words, i.e. an element of `T ⊗ T`.
pub type PairTensor = LinComb<(Word, Word)>;

/// Factor-wise product `(a⊗b)·(c⊗d) = ac ⊗ bd`.
pub fn pair_multiply(x: &PairTensor, y: &PairTensor) -> PairTensor {
    let mut out = PairTensor::zero();
    for ((a, b), s) in x {
        for ((c, d), t) in y {
            out.add_term((a.concat(c), b.concat(d)), s * t);
        }
    }
    out
}

/// `∂_i` on a single word: the sum over occurrences of `x_i` of prefix ⊗ suffix.
pub(crate) fn partial_word(i: Letter, w: &Word) -> impl Iterator<Item = (Word, Word)> + '_ {
    let letters = w.letters();
    letters
        .iter()
        .enumerate()
        .filter(move |(_, &l)| l == i)
        .map(move |(s, _)| (Word::from_slice(&letters[..s]), Word::from_slice(&letters[s + 1..])))
}

/// The double derivation `∂_i : T → T ⊗ T`, `x_j ↦ δ_ij 1⊗1`, extended to words
/// by summing over the positions where `x_i` occurs.
pub fn partial(i: usize, p: &NcPoly) -> Result<PairTensor> {
    p.alphabet.check_letter(i)?;
    let mut out = PairTensor::zero();
    for (w, c) in p.terms() {
        for pair in partial_word(i as Letter, w) {
            out.add_term(pair, c.clone());
        }
    }
    Ok(out)
}
