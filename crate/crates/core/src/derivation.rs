//! The graded Lie algebra `Der(T(A_n)) = ⊕_{k≥−1} A_n* ⊗ A_n^{⊗(k+1)}`.
//!
//! A basis element `x_{i0}* ⊗ w` sends the generator `x_{i0}` to the word `w`
//! and every other generator to zero. Degree-`−1` elements (empty `w`) delete
//! a letter; they act on generators by `x_j ↦ δ_{i0,j} · 1`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::cyclic::{BiCyclicPoly, CyclicPoly, Necklace, NecklacePair};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::linalg::{parse_rational, Rational, SparseVector, SpanTracker};
use crate::lincomb::LinComb;
use crate::tensor::{words_of_length, Alphabet, Letter, NcPoly, Word};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DerBasisElem {
    pub dual: Letter,
    pub word: Word,
}

impl DerBasisElem {
    pub fn new(dual: Letter, word: Word) -> Self {
        Self { dual, word }
    }

    pub fn degree(&self) -> i64 {
        self.word.len() as i64 - 1
    }

    /// Images of `w` under this element, one per occurrence of the dual letter.
    pub(crate) fn substitutions<'a>(&'a self, w: &'a [Letter]) -> impl Iterator<Item = Word> + 'a {
        w.iter()
            .enumerate()
            .filter(move |(_, &l)| l == self.dual)
            .map(move |(s, _)| Word::splice(&w[..s], self.word.letters(), &w[s + 1..]))
    }

    pub fn apply_to_word(&self, w: &Word) -> LinComb<Word> {
        let mut out = LinComb::zero();
        for v in self.substitutions(w.letters()) {
            out.add_term(v, Rational::from_integer(1.into()));
        }
        out
    }

    /// Action on a necklace, computed on its representative.
    pub fn act_on_necklace(&self, n: &Necklace) -> CyclicPoly {
        let mut out = CyclicPoly::zero();
        for v in self.substitutions(n.representative().letters()) {
            out.add_term(Necklace::new(&v), Rational::from_integer(1.into()));
        }
        out
    }

    pub fn act_on_pair(&self, p: &NecklacePair) -> BiCyclicPoly {
        let mut out = BiCyclicPoly::zero();
        for (l, c) in &self.act_on_necklace(&p.0) {
            out.add_term(NecklacePair(l.clone(), p.1.clone()), c.clone());
        }
        for (r, c) in &self.act_on_necklace(&p.1) {
            out.add_term(NecklacePair(p.0.clone(), r.clone()), c.clone());
        }
        out
    }
}

/// Bracket of two basis elements:
/// `[f⊗u, g⊗v] = Σ_s f(v_s) g⊗v[v_s↦u] − Σ_t g(u_t) f⊗u[u_t↦v]`.
pub fn bracket_basis(a: &DerBasisElem, b: &DerBasisElem) -> LinComb<DerBasisElem> {
    let one = Rational::from_integer(1.into());
    let mut out = LinComb::zero();
    for w in a.substitutions(b.word.letters()) {
        out.add_term(DerBasisElem::new(b.dual, w), one.clone());
    }
    for w in b.substitutions(a.word.letters()) {
        out.add_term(DerBasisElem::new(a.dual, w), -one.clone());
    }
    out
}

impl Ord for DerBasisElem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.word
            .len()
            .cmp(&other.word.len())
            .then(self.dual.cmp(&other.dual))
            .then_with(|| self.word.cmp(&other.word))
    }
}

impl PartialOrd for DerBasisElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DerBasisElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d{}*:{}", self.dual, self.word)
    }
}

impl fmt::Debug for DerBasisElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for DerBasisElem {
    type Err = Error;

    /// Parses `"d1*:1.2"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid derivation basis element {s:?}"));
        let rest = s.trim().strip_prefix('d').ok_or_else(bad)?;
        let (dual, word) = rest.split_once("*:").ok_or_else(bad)?;
        let dual: Letter = dual.parse().map_err(|_| bad())?;
        if dual == 0 {
            return Err(bad());
        }
        Ok(Self::new(dual, word.parse()?))
    }
}

impl Serialize for DerBasisElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// All basis elements of degree `k` (`k ≥ −1`), `n^{k+2}` of them.
pub fn enumerate_basis(alphabet: Alphabet, k: i64) -> Vec<DerBasisElem> {
    if k < -1 {
        return Vec::new();
    }
    let words = words_of_length(alphabet, (k + 1) as usize);
    alphabet
        .letters()
        .flat_map(|d| words.iter().map(move |w| DerBasisElem::new(d, w.clone())))
        .collect()
}

#[derive(Clone, PartialEq, Eq)]
pub struct Derivation {
    alphabet: Alphabet,
    terms: LinComb<DerBasisElem>,
}

impl Derivation {
    pub fn zero(alphabet: Alphabet) -> Self {
        Self {
            alphabet,
            terms: LinComb::zero(),
        }
    }

    pub fn basis(alphabet: Alphabet, e: DerBasisElem) -> Result<Self> {
        Self::from_terms(alphabet, LinComb::basis(e))
    }

    pub fn from_terms(alphabet: Alphabet, terms: LinComb<DerBasisElem>) -> Result<Self> {
        for e in terms.keys() {
            alphabet.check_letter(e.dual as usize)?;
            alphabet.check_word(&e.word)?;
        }
        Ok(Self { alphabet, terms })
    }

    pub(crate) fn from_terms_unchecked(alphabet: Alphabet, terms: LinComb<DerBasisElem>) -> Self {
        Self { alphabet, terms }
    }

    /// The matrix unit `E_ij`, i.e. `x_j* ⊗ x_i` (sends `x_j` to `x_i`).
    pub fn matrix_unit(alphabet: Alphabet, i: Letter, j: Letter) -> Result<Self> {
        Self::basis(alphabet, DerBasisElem::new(j, Word::letter(i)))
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn terms(&self) -> &LinComb<DerBasisElem> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn homogeneous_part(&self, k: i64) -> Self {
        Self {
            alphabet: self.alphabet,
            terms: self.terms.filter(|e| e.degree() == k),
        }
    }

    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut degs = self.terms.keys().map(DerBasisElem::degree);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.alphabet.same_as(&other.alphabet)?;
        Ok(Self::from_terms_unchecked(self.alphabet, self.terms.sum(&other.terms)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.alphabet.same_as(&other.alphabet)?;
        Ok(Self::from_terms_unchecked(self.alphabet, self.terms.difference(&other.terms)))
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        Self::from_terms_unchecked(self.alphabet, self.terms.scaled(c))
    }

    /// Image of the generator `x_l`.
    pub fn value_on(&self, l: Letter) -> LinComb<Word> {
        let mut out = LinComb::zero();
        for (e, c) in &self.terms {
            if e.dual == l {
                out.add_term(e.word.clone(), c.clone());
            }
        }
        out
    }

    pub(crate) fn apply_to_word(&self, w: &Word) -> LinComb<Word> {
        let mut out = LinComb::zero();
        for (e, c) in &self.terms {
            for v in e.substitutions(w.letters()) {
                out.add_term(v, c.clone());
            }
        }
        out
    }

    pub(crate) fn apply_terms(&self, p: &LinComb<Word>) -> LinComb<Word> {
        p.flat_map(|w| self.apply_to_word(w))
    }

    /// Leibniz extension of the generator values to `T(A_n)`.
    pub fn apply(&self, p: &NcPoly) -> Result<NcPoly> {
        self.alphabet.same_as(&p.alphabet())?;
        Ok(NcPoly::from_terms_unchecked(self.alphabet, self.apply_terms(p.terms())))
    }

    /// `[D1, D2] = D1∘D2 − D2∘D1`, computed term-wise with [`bracket_basis`].
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.alphabet.same_as(&other.alphabet)?;
        let mut out = LinComb::zero();
        for (a, s) in &self.terms {
            for (b, t) in &other.terms {
                out.add_scaled(&bracket_basis(a, b), &(s * t));
            }
        }
        Ok(Self::from_terms_unchecked(self.alphabet, out))
    }

    /// `d·(|u|⊗|v|) = |d(u)|⊗|v| + |u|⊗|d(v)|`.
    pub fn act_on_bicyclic(&self, b: &BiCyclicPoly) -> BiCyclicPoly {
        let mut out = BiCyclicPoly::zero();
        for (e, s) in &self.terms {
            for (p, t) in b {
                out.add_scaled(&e.act_on_pair(p), &(s * t));
            }
        }
        out
    }

    pub fn act_on_cyclic(&self, c: &CyclicPoly) -> CyclicPoly {
        let mut out = CyclicPoly::zero();
        for (e, s) in &self.terms {
            for (n, t) in c {
                out.add_scaled(&e.act_on_necklace(n), &(s * t));
            }
        }
        out
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.terms, f)
    }
}

impl Derivation {
    /// Parses the `Display` form, e.g. `"d1*:1.2 + -2*d2*:e + (1/3)*d1*:2"`.
    pub fn parse(alphabet: Alphabet, s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero(alphabet));
        }
        let mut terms = LinComb::zero();
        for part in s.split(" + ") {
            let part = part.trim();
            let (coeff, elem) = if let Some(rest) = part.strip_prefix('(') {
                rest.split_once(")*")
                    .ok_or_else(|| Error::Parse(format!("invalid term {part:?}")))?
            } else if part.starts_with('d') {
                ("1", part)
            } else {
                part.split_once('*')
                    .ok_or_else(|| Error::Parse(format!("invalid term {part:?}")))?
            };
            terms.add_term(elem.parse::<DerBasisElem>()?, parse_rational(coeff)?);
        }
        Self::from_terms(alphabet, terms)
    }
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Derivation[n={}]({})", self.alphabet.size(), self.terms)
    }
}

/// Rank report for the generation of `Der(k)` by brackets of low degrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MszReport {
    pub n: usize,
    pub k: usize,
    /// `dim Der(k) = n^{k+2}`.
    pub dim_target: usize,
    /// Rank of `s(A_n ⊗ A_n)`; only for `k = 2`.
    pub dim_complement: Option<usize>,
    pub dim_bracket_span: usize,
    /// Rank of the union of the bracket span and the complement.
    pub dim_total: usize,
    pub direct_sum_ok: bool,
}

/// Checks that `Der(2) = s(A⊗A) ⊕ [Der(1), Der(1)]` (`k = 2`, `n ≥ 2`) or that
/// `[Der(k−1), Der(1)] + [Der(k−2), Der(2)]` fills `Der(k)` (`n ≥ k ≥ 3`).
///
/// `s(x_i ⊗ x_j) = x_1* ⊗ x_i x_1 x_j`.
pub fn verify_msz_decomposition(alphabet: Alphabet, k: usize, exec: Execution) -> Result<MszReport> {
    let n = alphabet.size();
    let supported = (k == 2 && n >= 2) || (k >= 3 && n >= k);
    if !supported {
        return Err(Error::UnsupportedRange(format!(
            "bracket generation is checked for k = 2 with n >= 2, or n >= k >= 3 (got n = {n}, k = {k})"
        )));
    }
    let target = enumerate_basis(alphabet, k as i64);
    let index: std::collections::HashMap<&DerBasisElem, usize> =
        target.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let to_vec = |c: &LinComb<DerBasisElem>| {
        SparseVector::from_entries(target.len(), c.iter().map(|(e, v)| (index[e], v.clone())))
            .expect("bracket lands in Der(k)")
    };

    let mut factor_pairs: Vec<(Vec<DerBasisElem>, Vec<DerBasisElem>)> = Vec::new();
    if k == 2 {
        factor_pairs.push((enumerate_basis(alphabet, 1), enumerate_basis(alphabet, 1)));
    } else {
        factor_pairs.push((enumerate_basis(alphabet, k as i64 - 1), enumerate_basis(alphabet, 1)));
        factor_pairs.push((enumerate_basis(alphabet, k as i64 - 2), enumerate_basis(alphabet, 2)));
    }
    let mut brackets: Vec<SparseVector> = Vec::new();
    for (left, right) in &factor_pairs {
        let same = std::ptr::eq(left, right) || left == right;
        let rows = exec.flat_map(left, |a| {
            right
                .iter()
                .filter(|b| !same || a < *b)
                .map(|b| bracket_basis(a, b))
                .filter(|c| !c.is_zero())
                .map(|c| to_vec(&c))
                .collect::<Vec<_>>()
        });
        brackets.extend(rows);
    }

    let mut span = SpanTracker::new(target.len());
    for v in &brackets {
        span.insert(v)?;
        if span.rank() == target.len() {
            break;
        }
    }
    let dim_bracket_span = span.rank();

    let (dim_complement, dim_total) = if k == 2 {
        let complement: Vec<SparseVector> = alphabet
            .letters()
            .flat_map(|i| alphabet.letters().map(move |j| (i, j)))
            .map(|(i, j)| to_vec(&LinComb::basis(DerBasisElem::new(1, Word::from_slice(&[i, 1, j])))))
            .collect();
        let mut c_span = SpanTracker::new(target.len());
        for v in &complement {
            c_span.insert(v)?;
        }
        for v in &complement {
            span.insert(v)?;
        }
        (Some(c_span.rank()), span.rank())
    } else {
        (None, dim_bracket_span)
    };

    let direct_sum_ok = dim_total == target.len() && dim_complement.unwrap_or(0) + dim_bracket_span == dim_total;
    Ok(MszReport {
        n,
        k,
        dim_target: target.len(),
        dim_complement,
        dim_bracket_span,
        dim_total,
        direct_sum_ok,
    })
}
