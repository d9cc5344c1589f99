//! Symplectic derivations of the free Lie algebra on `x_1..x_n, y_1..y_n`,
//! the injection `φ: ∧³H → Der_Sp`, and the Enomoto–Satoh trace.
//!
//! Generators are letters `1..=2n`: `x_i ↔ i`, `y_i ↔ n + i`. The pairing is
//! `ω(x_i, y_j) = δ_ij = −ω(y_j, x_i)`, all other pairings zero.

pub mod lyndon;
mod uniqueness;

pub use lyndon::{expansion, is_lyndon, lyndon_words, standard_factorization, witt_dimension, LieElement};
pub use uniqueness::{
    der_sp_basis, es_uniqueness_solve, hom_sp_wedge3_to_h, phi_sample_pairs, trace_cocycle_check, CutoffRow, DerSpBasis,
    EsOptions, EsUniquenessReport, HomSpReport,
};

use std::fmt;

use crate::cyclic::{CyclicPoly, Necklace};
use crate::derivation::{DerBasisElem, Derivation};
use crate::divergence::Cochain;
use crate::error::{Error, Result};
use crate::linalg::{format_rational, int, Rational};
use crate::lincomb::LinComb;
use crate::tensor::{commutator_terms, Alphabet, Letter, NcPoly, Word};

use lyndon::lyndon_coordinates;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SymplecticContext {
    n: usize,
    alphabet: Alphabet,
}

impl SymplecticContext {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidAlphabet(0));
        }
        Ok(Self {
            n,
            alphabet: Alphabet::new(2 * n)?,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn x(&self, i: usize) -> Letter {
        i as Letter
    }

    pub fn y(&self, i: usize) -> Letter {
        (self.n + i) as Letter
    }

    pub fn generators(&self) -> impl Iterator<Item = Letter> {
        self.alphabet.letters()
    }

    pub fn label(&self, l: Letter) -> String {
        let l = l as usize;
        if l <= self.n {
            format!("x{l}")
        } else {
            format!("y{}", l - self.n)
        }
    }

    /// Parses `"x3"` or `"y1"`.
    pub fn parse_generator(&self, s: &str) -> Result<Letter> {
        let bad = || Error::Parse(format!("invalid generator {s:?}"));
        let s = s.trim();
        let (kind, index) = s.split_at(s.char_indices().nth(1).map_or(s.len(), |(i, _)| i));
        let i: usize = index.parse().map_err(|_| bad())?;
        if i == 0 || i > self.n {
            return Err(bad());
        }
        match kind {
            "x" => Ok(self.x(i)),
            "y" => Ok(self.y(i)),
            _ => Err(bad()),
        }
    }

    pub fn omega(&self, a: Letter, b: Letter) -> i64 {
        let n = self.n as Letter;
        if a <= n && b == a + n {
            1
        } else if a > n && b + n == a {
            -1
        } else {
            0
        }
    }

    /// `Σ_j [x_j, y_j]` in the word basis.
    pub fn symplectic_element(&self) -> LinComb<Word> {
        let mut out = LinComb::zero();
        for j in 1..=self.n {
            out.add_assign_ref(&commutator_terms(
                &LinComb::basis(Word::letter(self.x(j))),
                &LinComb::basis(Word::letter(self.y(j))),
            ));
        }
        out
    }

    pub fn format_lie(&self, p: &LieElement) -> String {
        p.format_with(&|l| self.label(l))
    }

    pub fn format_h(&self, h: &HElement) -> String {
        if h.is_zero() {
            return "0".to_string();
        }
        h.iter()
            .map(|(l, c)| format!("{}*{}", format_rational(c), self.label(*l)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Parses `"x1^y1^x2"`.
    pub fn parse_wedge(&self, s: &str) -> Result<Wedge3> {
        let parts: Vec<&str> = s.split('^').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("expected three wedge factors in {s:?}")));
        }
        let z: Vec<Letter> = parts.iter().map(|p| self.parse_generator(p)).collect::<Result<_>>()?;
        Wedge3::basis(*self, z[0], z[1], z[2])
    }
}

/// Element of `H`, as a combination of generators.
pub type HElement = LinComb<Letter>;

/// Sorts a triple, returning the permutation sign; `None` on a repeated letter.
fn normalize(z: [Letter; 3]) -> Option<(i64, [Letter; 3])> {
    let mut t = z;
    let mut sign = 1;
    for i in 0..3 {
        for j in 0..2 - i {
            if t[j] > t[j + 1] {
                t.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    (t[0] != t[1] && t[1] != t[2]).then_some((sign, t))
}

/// Element of `∧³H`, keyed by strictly increasing triples.
#[derive(Clone, PartialEq, Eq)]
pub struct Wedge3 {
    ctx: SymplecticContext,
    terms: LinComb<[Letter; 3]>,
}

impl Wedge3 {
    pub fn zero(ctx: SymplecticContext) -> Self {
        Self {
            ctx,
            terms: LinComb::zero(),
        }
    }

    /// `z1 ∧ z2 ∧ z3`.
    pub fn basis(ctx: SymplecticContext, z1: Letter, z2: Letter, z3: Letter) -> Result<Self> {
        for z in [z1, z2, z3] {
            ctx.alphabet.check_letter(z as usize)?;
        }
        let mut w = Self::zero(ctx);
        w.add_term([z1, z2, z3], int(1));
        Ok(w)
    }

    fn add_term(&mut self, z: [Letter; 3], c: Rational) {
        if let Some((sign, t)) = normalize(z) {
            self.terms.add_term(t, c * int(sign));
        }
    }

    pub fn terms(&self) -> &LinComb<[Letter; 3]> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            ctx: self.ctx,
            terms: self.terms.sum(&other.terms),
        }
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        Self {
            ctx: self.ctx,
            terms: self.terms.scaled(c),
        }
    }

    /// Leibniz action of a linear map `H → H` given on generators.
    pub fn act(&self, x: &dyn Fn(Letter) -> HElement) -> Self {
        let mut out = Self::zero(self.ctx);
        for (z, c) in &self.terms {
            for slot in 0..3 {
                for (l, a) in &x(z[slot]) {
                    let mut t = *z;
                    t[slot] = *l;
                    out.add_term(t, c * a);
                }
            }
        }
        out
    }
}

impl fmt::Display for Wedge3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let label = |z: &[Letter; 3]| z.iter().map(|&l| self.ctx.label(l)).collect::<Vec<_>>().join("^");
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(z, c)| {
                if *c == int(1) {
                    label(z)
                } else {
                    format!("{}*{}", format_rational(c), label(z))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for Wedge3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Wedge3({self})")
    }
}

/// Basis `z_a ∧ z_b ∧ z_c`, `a < b < c`, of `∧³H`.
pub fn wedge3_basis(ctx: SymplecticContext) -> Vec<Wedge3> {
    let m = ctx.alphabet.size() as Letter;
    let mut out = Vec::new();
    for a in 1..=m {
        for b in a + 1..=m {
            for c in b + 1..=m {
                out.push(Wedge3::basis(ctx, a, b, c).expect("letters in range"));
            }
        }
    }
    out
}

/// A derivation of the free Lie algebra annihilating `Σ_j [x_j, y_j]`, stored
/// as `Σ c · g* ⊗ P_w` with `w` Lyndon.
#[derive(Clone, PartialEq, Eq)]
pub struct SpDerivation {
    ctx: SymplecticContext,
    terms: LinComb<(Letter, Word)>,
}

impl SpDerivation {
    pub fn zero(ctx: SymplecticContext) -> Self {
        Self {
            ctx,
            terms: LinComb::zero(),
        }
    }

    /// Checks that every word is Lyndon and that the symplectic condition holds.
    pub fn new(ctx: SymplecticContext, terms: LinComb<(Letter, Word)>) -> Result<Self> {
        for (g, w) in terms.keys() {
            ctx.alphabet.check_letter(*g as usize)?;
            ctx.alphabet.check_word(w)?;
            if !is_lyndon(w.letters()) {
                return Err(Error::NotLie(w.to_string()));
            }
        }
        let d = Self { ctx, terms };
        if !d.is_symplectic() {
            return Err(Error::NotSymplectic);
        }
        Ok(d)
    }

    pub(crate) fn from_terms_unchecked(ctx: SymplecticContext, terms: LinComb<(Letter, Word)>) -> Self {
        Self { ctx, terms }
    }

    /// Recognizes a derivation of `T(H)` whose generator values are Lie.
    pub fn from_derivation(ctx: SymplecticContext, d: &Derivation) -> Result<Self> {
        let mut terms = LinComb::zero();
        for g in ctx.generators() {
            for (w, c) in &lyndon_coordinates(&d.value_on(g))? {
                terms.add_term((g, w.clone()), c.clone());
            }
        }
        Self::new(ctx, terms)
    }

    pub fn context(&self) -> SymplecticContext {
        self.ctx
    }

    pub fn terms(&self) -> &LinComb<(Letter, Word)> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    /// Degree `k` when every value lies in `𝔏(k + 1)`.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|(_, w)| w.len() - 1);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn value_on(&self, g: Letter) -> LieElement {
        let terms = self
            .terms
            .iter()
            .filter(|((h, _), _)| *h == g)
            .map(|((_, w), c)| (w.clone(), c.clone()))
            .collect();
        LieElement::from_lyndon_terms(self.ctx.alphabet, terms).expect("stored words are Lyndon")
    }

    /// The induced derivation of `T(H)`.
    pub fn to_derivation(&self) -> Derivation {
        let mut terms = LinComb::zero();
        for ((g, w), c) in &self.terms {
            for (v, a) in &expansion(w) {
                terms.add_term(DerBasisElem::new(*g, v.clone()), c * a);
            }
        }
        Derivation::from_terms(self.ctx.alphabet, terms).expect("letters in range")
    }

    /// `D(Σ_j [x_j, y_j])`, zero exactly for symplectic derivations.
    pub fn symplectic_defect(&self) -> NcPoly {
        let omega = NcPoly::from_terms(self.ctx.alphabet, self.ctx.symplectic_element()).expect("letters in range");
        self.to_derivation().apply(&omega).expect("same alphabet")
    }

    pub fn is_symplectic(&self) -> bool {
        self.symplectic_defect().is_zero()
    }

    pub fn bracket(&self, other: &Self) -> Result<Self> {
        if self.ctx != other.ctx {
            return Err(Error::AlphabetMismatch {
                left: self.ctx.alphabet.size(),
                right: other.ctx.alphabet.size(),
            });
        }
        let br = self.to_derivation().bracket(&other.to_derivation())?;
        Self::from_derivation(self.ctx, &br)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            ctx: self.ctx,
            terms: self.terms.sum(&other.terms),
        }
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        Self {
            ctx: self.ctx,
            terms: self.terms.scaled(c),
        }
    }

    /// Single-factor Leibniz action on cyclic words.
    pub fn act_on_cyclic(&self, c: &CyclicPoly) -> CyclicPoly {
        self.to_derivation().act_on_cyclic(c)
    }
}

impl fmt::Display for SpDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((g, w), c)| {
                let label = |l: Letter| self.ctx.label(l);
                format!("{}*{}*⊗{}", format_rational(c), self.ctx.label(*g), lyndon::bracketing(w, &label))
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for SpDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SpDerivation({self})")
    }
}

/// `φ(z1∧z2∧z3) = Σ_g g* ⊗ (ω(g, z1)[z2, z3] + ω(g, z2)[z3, z1] + ω(g, z3)[z1, z2])`,
/// `g` running over all `x_i` and `y_i`.
pub fn phi_inject(w: &Wedge3) -> Result<SpDerivation> {
    let ctx = w.ctx;
    let br = |p: Letter, q: Letter| commutator_terms(&LinComb::basis(Word::letter(p)), &LinComb::basis(Word::letter(q)));
    let mut terms = LinComb::zero();
    for (z, c) in &w.terms {
        for g in ctx.generators() {
            let mut value = LinComb::zero();
            for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
                let o = ctx.omega(g, z[i]);
                if o != 0 {
                    value.add_scaled(&br(z[j], z[k]), &int(o));
                }
            }
            for (lw, v) in &lyndon_coordinates(&value)? {
                terms.add_term((g, lw.clone()), c * v);
            }
        }
    }
    SpDerivation::new(ctx, terms)
}

/// `φ̄₃(z1∧z2∧z3) = Σ_{i<j} ω(z_i, z_j) (−1)^{i+j+1} z_k`, `{i, j, k} = {1, 2, 3}`.
pub fn phi_bar_3(w: &Wedge3) -> HElement {
    let mut out = HElement::zero();
    for (z, c) in &w.terms {
        for (i, j, k) in [(0usize, 1usize, 2usize), (0, 2, 1), (1, 2, 0)] {
            let sign = if (i + j) % 2 == 1 { 1 } else { -1 };
            let o = w.ctx.omega(z[i], z[j]) * sign;
            if o != 0 {
                out.add_term(z[k], c * int(o));
            }
        }
    }
    out
}

/// `φ_k`: expand the Lie values and contract each dual with the leading letter.
pub fn contraction_phi_k(d: &SpDerivation, k: usize) -> Result<NcPoly> {
    if let Some(deg) = d.homogeneous_degree() {
        if deg != k {
            return Err(Error::DegreeMismatch {
                expected: k as i64,
                found: deg as i64,
            });
        }
    } else if !d.is_zero() {
        return Err(Error::DegreeMismatch {
            expected: k as i64,
            found: -1,
        });
    }
    let mut out = LinComb::zero();
    for ((g, w), c) in &d.terms {
        for (v, a) in &expansion(w) {
            if v.letters()[0] == *g {
                out.add_term(Word::from_slice(&v.letters()[1..]), c * a);
            }
        }
    }
    Ok(NcPoly::from_terms_unchecked(d.ctx.alphabet, out))
}

/// `Tr_ES = p_k ∘ φ_k` as a cochain on `Der(T(H))`: `g* ⊗ w ↦ δ_{g, w_1} |w_2 … w_m|`.
#[derive(Clone, Copy, Debug, Default)]
pub struct EsTrace;

impl Cochain<Necklace> for EsTrace {
    fn eval_basis(&self, e: &DerBasisElem) -> LinComb<Necklace> {
        match e.word.letters().split_first() {
            Some((&first, rest)) if first == e.dual => LinComb::basis(Necklace::new(&Word::from_slice(rest))),
            _ => LinComb::zero(),
        }
    }
}

/// Enomoto–Satoh trace of a symplectic derivation (all homogeneous parts).
pub fn es_trace(d: &SpDerivation) -> CyclicPoly {
    let mut out = CyclicPoly::zero();
    for ((g, w), c) in &d.terms {
        for (v, a) in &expansion(w) {
            out.add_scaled(&EsTrace.eval_basis(&DerBasisElem::new(*g, v.clone())), &(c * a));
        }
    }
    out
}

/// `d1·f(d2) − d2·f(d1) − f([d1, d2])` for a map `f: Der_Sp → |T(H)|`.
pub fn sp_coboundary(f: &dyn Fn(&SpDerivation) -> CyclicPoly, d1: &SpDerivation, d2: &SpDerivation) -> Result<CyclicPoly> {
    let br = d1.bracket(d2)?;
    let mut out = d1.act_on_cyclic(&f(d2));
    out.sub_assign_ref(&d2.act_on_cyclic(&f(d1)));
    out.sub_assign_ref(&f(&br));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::seeded;
    use rand::Rng;

    fn ctx(n: usize) -> SymplecticContext {
        SymplecticContext::new(n).unwrap()
    }

    fn neck(c: &SymplecticContext, s: &[&str]) -> Necklace {
        let letters: Vec<Letter> = s.iter().map(|g| c.parse_generator(g).unwrap()).collect();
        Necklace::new(&Word::from_slice(&letters))
    }

    fn sp(c: SymplecticContext, terms: &[(&str, Word, i64)]) -> SpDerivation {
        SpDerivation::from_terms_unchecked(
            c,
            terms.iter().map(|(g, w, k)| ((c.parse_generator(g).unwrap(), w.clone()), int(*k))).collect(),
        )
    }

    #[test]
    fn omega_convention() {
        let c = ctx(2);
        assert_eq!(c.omega(c.x(1), c.y(1)), 1);
        assert_eq!(c.omega(c.y(1), c.x(1)), -1);
        assert_eq!(c.omega(c.x(1), c.y(2)), 0);
        assert_eq!(c.omega(c.x(1), c.x(2)), 0);
        assert_eq!(c.label(c.y(2)), "y2");
        assert!(c.parse_generator("z1").is_err());
        assert!(c.parse_generator("x3").is_err());
    }

    #[test]
    fn wedge_normalization() {
        let c = ctx(2);
        let w = c.parse_wedge("x1^y1^x2").unwrap();
        assert_eq!(w.to_string(), "-1*x1^x2^y1");
        assert!(c.parse_wedge("x1^x1^y2").unwrap().is_zero());
        assert_eq!(wedge3_basis(c).len(), 4);
        assert_eq!(wedge3_basis(ctx(3)).len(), 20);
    }

    #[test]
    fn phi_bar_examples() {
        for n in [2, 3] {
            let c = ctx(n);
            for i in 1..=n {
                for j in (1..=n).filter(|&j| j != i) {
                    let w = Wedge3::basis(c, c.x(i), c.y(i), c.x(j)).unwrap();
                    assert_eq!(phi_bar_3(&w), HElement::basis(c.x(j)));
                }
            }
        }
        let c = ctx(3);
        assert!(phi_bar_3(&c.parse_wedge("x1^x2^x3").unwrap()).is_zero());
    }

    #[test]
    fn phi_examples() {
        let c = ctx(3);
        let d = phi_inject(&c.parse_wedge("x1^x2^x3").unwrap()).unwrap();
        let br = |p: &str, q: &str| {
            LieElement::generator(c.alphabet(), c.parse_generator(p).unwrap())
                .unwrap()
                .bracket(&LieElement::generator(c.alphabet(), c.parse_generator(q).unwrap()).unwrap())
                .unwrap()
        };
        assert_eq!(d.value_on(c.y(1)), br("x2", "x3").scaled(&int(-1)));
        assert_eq!(d.value_on(c.y(2)), br("x3", "x1").scaled(&int(-1)));
        assert_eq!(d.value_on(c.y(3)), br("x1", "x2").scaled(&int(-1)));
        for g in 1..=3 {
            assert!(d.value_on(c.x(g)).is_zero());
        }
        let d = phi_inject(&c.parse_wedge("x1^y1^x2").unwrap()).unwrap();
        assert!(d.symplectic_defect().is_zero());
    }

    #[test]
    fn contraction_examples() {
        let c = ctx(3);
        let gen = |l: Letter| LieElement::generator(c.alphabet(), l).unwrap();
        let x123 = gen(1).bracket(&gen(2)).unwrap().bracket(&gen(3)).unwrap();
        let d = SpDerivation::from_terms_unchecked(c, x123.terms().iter().map(|(w, a)| ((1, w.clone()), a.clone())).collect());
        let expected = NcPoly::word(c.alphabet(), Word::from_slice(&[2, 3])).unwrap();
        assert_eq!(contraction_phi_k(&d, 2).unwrap(), expected);
        assert!(contraction_phi_k(&d, 1).is_err());
        let e = sp(c, &[("x1", Word::from_slice(&[2, 3]), 1)]);
        assert!(contraction_phi_k(&e, 1).unwrap().is_zero());
        assert!(es_trace(&e).is_zero());
        let f = sp(c, &[("x1", Word::from_slice(&[1, 2]), 1)]);
        assert_eq!(contraction_phi_k(&f, 1).unwrap(), NcPoly::generator(c.alphabet(), 2).unwrap());
        assert_eq!(es_trace(&d), CyclicPoly::basis(neck(&c, &["x2", "x3"])));
        assert_eq!(es_trace(&d.scaled(&int(2))), es_trace(&d).scaled(&int(2)));
    }

    #[test]
    fn degree_one_trace_value() {
        let c = ctx(2);
        let d = phi_inject(&c.parse_wedge("x1^y1^x2").unwrap()).unwrap();
        assert_eq!(es_trace(&d), CyclicPoly::term(neck(&c, &["x2"]), int(-2)));
    }

    #[test]
    fn trace_is_homogeneous() {
        let c = ctx(2);
        let basis = wedge3_basis(c);
        let mut rng = seeded(3);
        for _ in 0..10 {
            let a = phi_inject(&basis[rng.gen_range(0..basis.len())]).unwrap();
            let b = phi_inject(&basis[rng.gen_range(0..basis.len())]).unwrap();
            let br = a.bracket(&b).unwrap();
            assert!(es_trace(&br).keys().all(|n| n.len() == 2));
            assert!(es_trace(&a).keys().all(|n| n.len() == 1));
        }
    }
}
