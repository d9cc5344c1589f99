//! The non-commutative divergence, its switch, and the coboundary of
//! degree-zero 1-cochains `Der(T(A_n)) → |T|⊗|T|` (or `→ |T|`).

use std::fmt;
use std::hash::Hash;

use crate::cyclic::{bicyclic_basis, necklaces, Necklace, NecklacePair};
use crate::derivation::{DerBasisElem, Derivation};
use crate::error::{Error, Result};
use crate::linalg::{int, Rational};
use crate::lincomb::LinComb;
use crate::tensor::{Alphabet, Word};

/// Basis keys of a module over `Der(T(A_n))` graded by word length.
pub trait TargetKey: Ord + Clone + Hash + Send + Sync + fmt::Display + fmt::Debug + 'static {
    /// Number of cyclic tensor factors.
    const FACTORS: usize;

    /// Builds a key from exactly [`Self::FACTORS`] words.
    fn from_factors(factors: &[Word]) -> Self;

    fn unit() -> Self {
        Self::from_factors(&vec![Word::empty(); Self::FACTORS])
    }

    fn act(e: &DerBasisElem, key: &Self) -> LinComb<Self>;
    fn basis(alphabet: Alphabet, degree: usize) -> Vec<Self>;
    fn degree(&self) -> usize;
}

impl TargetKey for Necklace {
    const FACTORS: usize = 1;

    fn from_factors(factors: &[Word]) -> Self {
        Necklace::new(&factors[0])
    }

    fn act(e: &DerBasisElem, key: &Self) -> LinComb<Self> {
        e.act_on_necklace(key)
    }

    fn basis(alphabet: Alphabet, degree: usize) -> Vec<Self> {
        necklaces(alphabet, degree)
    }

    fn degree(&self) -> usize {
        self.len()
    }
}

impl TargetKey for NecklacePair {
    const FACTORS: usize = 2;

    fn from_factors(factors: &[Word]) -> Self {
        NecklacePair::new(&factors[0], &factors[1])
    }

    fn act(e: &DerBasisElem, key: &Self) -> LinComb<Self> {
        e.act_on_pair(key)
    }

    fn basis(alphabet: Alphabet, degree: usize) -> Vec<Self> {
        bicyclic_basis(alphabet, degree)
    }

    fn degree(&self) -> usize {
        NecklacePair::degree(self)
    }
}

/// Module action of a derivation on a target element.
pub fn act<K: TargetKey>(d: &Derivation, x: &LinComb<K>) -> LinComb<K> {
    let mut out = LinComb::zero();
    for (e, s) in d.terms() {
        for (k, t) in x {
            out.add_scaled(&K::act(e, k), &(s * t));
        }
    }
    out
}

/// A linear map on derivations, given by its values on basis elements.
pub trait Cochain<K: TargetKey>: Sync {
    fn eval_basis(&self, e: &DerBasisElem) -> LinComb<K>;

    fn eval(&self, d: &Derivation) -> LinComb<K> {
        let mut out = LinComb::zero();
        for (e, c) in d.terms() {
            out.add_scaled(&self.eval_basis(e), c);
        }
        out
    }
}

impl<K: TargetKey, C: Cochain<K> + ?Sized> Cochain<K> for &C {
    fn eval_basis(&self, e: &DerBasisElem) -> LinComb<K> {
        (**self).eval_basis(e)
    }
}

/// `d1·c(d2) − d2·c(d1) − c([d1, d2])`; zero iff the cocycle identity holds on the pair.
pub fn coboundary<K: TargetKey, C: Cochain<K> + ?Sized>(c: &C, d1: &Derivation, d2: &Derivation) -> Result<LinComb<K>> {
    let br = d1.bracket(d2)?;
    let mut out = act(d1, &c.eval(d2));
    out.sub_assign_ref(&act(d2, &c.eval(d1)));
    out.sub_assign_ref(&c.eval(&br));
    Ok(out)
}

fn div_terms(e: &DerBasisElem, switched: bool) -> LinComb<NecklacePair> {
    let w = e.word.letters();
    let mut out = LinComb::zero();
    for (j, _) in w.iter().enumerate().filter(|(_, &l)| l == e.dual) {
        let pre = Word::from_slice(&w[..j]);
        let post = Word::from_slice(&w[j + 1..]);
        let key = if switched {
            NecklacePair::new(&post, &pre)
        } else {
            NecklacePair::new(&pre, &post)
        };
        out.add_term(key, int(1));
    }
    out
}

/// `Div(x_{i0}* ⊗ z_{i1}…z_{im}) = Σ_{j: ij = i0} |z_{i1}…z_{i(j−1)}| ⊗ |z_{i(j+1)}…z_{im}|`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Div;

/// `σ∘Div`, the divergence with the two factors exchanged.
#[derive(Clone, Copy, Debug, Default)]
pub struct SigmaDiv;

impl Cochain<NecklacePair> for Div {
    fn eval_basis(&self, e: &DerBasisElem) -> LinComb<NecklacePair> {
        div_terms(e, false)
    }
}

impl Cochain<NecklacePair> for SigmaDiv {
    fn eval_basis(&self, e: &DerBasisElem) -> LinComb<NecklacePair> {
        div_terms(e, true)
    }
}

pub fn div(d: &Derivation) -> LinComb<NecklacePair> {
    Div.eval(d)
}

pub fn sigma_div(d: &Derivation) -> LinComb<NecklacePair> {
    SigmaDiv.eval(d)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ZeroCochain;

impl<K: TargetKey> Cochain<K> for ZeroCochain {
    fn eval_basis(&self, _: &DerBasisElem) -> LinComb<K> {
        LinComb::zero()
    }
}

/// Cochain backed by a closure on basis elements.
pub struct FnCochain<F>(pub F);

impl<K: TargetKey, F: Fn(&DerBasisElem) -> LinComb<K> + Sync> Cochain<K> for FnCochain<F> {
    fn eval_basis(&self, e: &DerBasisElem) -> LinComb<K> {
        (self.0)(e)
    }
}

/// Rational combination of cochains.
pub struct Combination<'a, K: TargetKey> {
    pub parts: Vec<(Rational, &'a (dyn Cochain<K> + 'a))>,
}

impl<K: TargetKey> Cochain<K> for Combination<'_, K> {
    fn eval_basis(&self, e: &DerBasisElem) -> LinComb<K> {
        let mut out = LinComb::zero();
        for (c, part) in &self.parts {
            out.add_scaled(&part.eval_basis(e), c);
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum N1Kind {
    /// `x* ⊗ x^{k+1} ↦ (k+1) x^k ⊗ 1`
    DivTensorOne,
    /// `x* ⊗ x^{k+1} ↦ (k+1) 1 ⊗ x^k`
    OneTensorDiv,
    /// `x* ⊗ x^{k+1} ↦ Σ_{s+t=k} x^s ⊗ x^t`
    Div,
}

/// One of the three classical cocycles on `Der(𝕂⟨x⟩)`, written through its
/// coefficient table `x* ⊗ x^{k+1} ↦ Σ_{s+t=k} c_{s,t} |x^s| ⊗ |x^t|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct N1Cocycle(pub N1Kind);

impl N1Cocycle {
    pub fn coefficient(&self, s: usize, t: usize) -> i64 {
        match self.0 {
            N1Kind::DivTensorOne if t == 0 => s as i64 + 1,
            N1Kind::OneTensorDiv if s == 0 => t as i64 + 1,
            N1Kind::Div => 1,
            _ => 0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self.0 {
            N1Kind::DivTensorOne => "div⊗1",
            N1Kind::OneTensorDiv => "1⊗div",
            N1Kind::Div => "Div",
        }
    }
}

pub(crate) fn power_pair(s: usize, t: usize) -> NecklacePair {
    NecklacePair::new(&Word::from_slice(&vec![1; s]), &Word::from_slice(&vec![1; t]))
}

impl Cochain<NecklacePair> for N1Cocycle {
    fn eval_basis(&self, e: &DerBasisElem) -> LinComb<NecklacePair> {
        if e.dual != 1 || e.word.is_empty() {
            return LinComb::zero();
        }
        let k = e.word.len() - 1;
        (0..=k)
            .map(|s| (power_pair(s, k - s), int(self.coefficient(s, k - s))))
            .collect()
    }
}

/// `div⊗1`, `1⊗div` and `Div` for the one-generator algebra.
pub fn n1_classical_cocycles(alphabet: Alphabet) -> Result<[N1Cocycle; 3]> {
    if alphabet.size() != 1 {
        return Err(Error::UnsupportedRange(format!(
            "the classical cocycles live on one generator, got n = {}",
            alphabet.size()
        )));
    }
    Ok([
        N1Cocycle(N1Kind::DivTensorOne),
        N1Cocycle(N1Kind::OneTensorDiv),
        N1Cocycle(N1Kind::Div),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic::switch;
    use crate::derivation::tests::d;
    use crate::linalg::{rank, SparseMatrix};
    use crate::random::{random_derivation, seeded};
    use proptest::prelude::*;

    fn pair(l: &str, r: &str) -> NecklacePair {
        NecklacePair::new(&l.parse().unwrap(), &r.parse().unwrap())
    }

    fn bi(terms: &[(&str, &str, i64)]) -> LinComb<NecklacePair> {
        terms.iter().map(|(l, r, c)| (pair(l, r), int(*c))).collect()
    }

    #[test]
    fn div_examples() {
        assert_eq!(div(&d(3, &[("d1*:1", 1)])), bi(&[("e", "e", 1)]));
        assert!(div(&d(3, &[("d1*:2.3", 1)])).is_zero());
        let sym = bi(&[("e", "1", 1), ("1", "e", 1)]);
        assert_eq!(div(&d(3, &[("d1*:1.1", 1)])), sym);
        assert_eq!(sigma_div(&d(3, &[("d1*:1.1", 1)])), sym);
        assert_eq!(div(&d(3, &[("d1*:2.1.3", 1)])), bi(&[("2", "3", 1)]));
        assert_eq!(sigma_div(&d(3, &[("d1*:2.1.3", 1)])), bi(&[("3", "2", 1)]));
    }

    #[test]
    fn classical_examples() {
        let a = Alphabet::new(1).unwrap();
        let [d1, one_d, full] = n1_classical_cocycles(a).unwrap();
        let x3 = d(1, &[("d1*:1.1.1", 1)]);
        assert_eq!(d1.eval(&x3), bi(&[("1.1", "e", 3)]));
        assert_eq!(full.eval(&x3), bi(&[("1.1", "e", 1), ("1", "1", 1), ("e", "1.1", 1)]));
        assert_eq!(full.eval(&x3), div(&x3));
        assert_eq!(one_d.eval(&d(1, &[("d1*:1", 1)])), bi(&[("e", "e", 1)]));
        assert!(n1_classical_cocycles(Alphabet::new(2).unwrap()).is_err());
    }

    #[test]
    fn classical_cocycles_on_basis_pairs() {
        let a = Alphabet::new(1).unwrap();
        let xk = |k: usize| Derivation::basis(a, DerBasisElem::new(1, Word::from_slice(&vec![1; k + 1]))).unwrap();
        for c in n1_classical_cocycles(a).unwrap() {
            for k in 0..=8 {
                for l in 0..=8 {
                    assert!(coboundary(&c, &xk(k), &xk(l)).unwrap().is_zero(), "{} on ({k},{l})", c.name());
                }
            }
        }
    }

    #[test]
    fn classical_cocycles_independent() {
        let a = Alphabet::new(1).unwrap();
        let rows: Vec<Vec<i64>> = n1_classical_cocycles(a)
            .unwrap()
            .iter()
            .map(|c| vec![c.coefficient(2, 0), c.coefficient(1, 1), c.coefficient(0, 2)])
            .collect();
        assert_eq!(rank(&SparseMatrix::from_dense(&rows)), 3);
    }

    #[test]
    fn n1_switch_is_trivial() {
        let a = Alphabet::new(1).unwrap();
        for k in 0..6 {
            let x = Derivation::basis(a, DerBasisElem::new(1, Word::from_slice(&vec![1; k + 1]))).unwrap();
            assert_eq!(sigma_div(&x), div(&x));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn div_is_a_cocycle(seed in any::<u64>(), p in -1i64..=3, q in -1i64..=3) {
            prop_assume!(p + q <= 4);
            let mut rng = seeded(seed);
            let a = Alphabet::new(3).unwrap();
            let d1 = random_derivation(&mut rng, a, p, 3);
            let d2 = random_derivation(&mut rng, a, q, 3);
            prop_assert!(coboundary(&Div, &d1, &d2).unwrap().is_zero());
            prop_assert!(coboundary(&SigmaDiv, &d1, &d2).unwrap().is_zero());
            prop_assert!(coboundary(&Div, &d1, &d1).unwrap().is_zero());
            prop_assert!(Cochain::<Necklace>::eval(&ZeroCochain, &d1).is_zero());
        }

        #[test]
        fn div_has_degree_zero(seed in any::<u64>(), k in 0i64..=4) {
            let mut rng = seeded(seed);
            let x = random_derivation(&mut rng, Alphabet::new(3).unwrap(), k, 4);
            let v = div(&x);
            prop_assert!(v.keys().all(|p| p.degree() as i64 == k));
            prop_assert_eq!(sigma_div(&x), switch(&v));
        }
    }
}
