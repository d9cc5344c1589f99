//! Consistency checks on solver output.

use num_traits::{One, Zero};
use serde::Serialize;

use super::ansatz::{CochainAnsatz, Mode, Target};
use super::{solve_generic, table, to_vectors, SolveOptions};
use crate::cyclic::NecklacePair;
use crate::derivation::DerBasisElem;
use crate::divergence::{power_pair, Cochain, TargetKey};
use crate::error::{Error, Result};
use crate::linalg::{format_rational, int, span_dimension, Rational};
use crate::tensor::{Alphabet, Word};

/// Linear relation `Σ c_i x_i = 0` between named unknowns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub label: String,
    pub terms: Vec<(&'static str, i64)>,
}

impl Relation {
    fn new(label: &str, terms: &[(&'static str, i64)]) -> Self {
        Self {
            label: label.to_string(),
            terms: terms.to_vec(),
        }
    }

    pub fn evaluate(&self, ansatz: &CochainAnsatz, coeffs: &[Rational]) -> Option<Rational> {
        let mut total = Rational::zero();
        for (name, c) in &self.terms {
            total += &coeffs[ansatz.index_of(name)?] * int(*c);
        }
        Some(total)
    }

    pub fn holds(&self, ansatz: &CochainAnsatz, coeffs: &[Rational]) -> bool {
        self.evaluate(ansatz, coeffs).is_some_and(|v| v.is_zero())
    }
}

/// Relations between the degree-1 and degree-2 equivariant coefficients, with
/// `t = b4` as the free parameter of the `b` family. `b1 = b2 = 0` is added
/// once degree-3 constraints are present.
pub fn equivariant_relations(max_degree: usize) -> Vec<Relation> {
    let mut out = Vec::new();
    if max_degree >= 1 {
        out.push(Relation::new("alpha + beta = a", &[("alpha", 1), ("beta", 1), ("a", -1)]));
        out.push(Relation::new("gamma + omega = a", &[("gamma", 1), ("omega", 1), ("a", -1)]));
    }
    if max_degree >= 2 {
        out.extend([
            Relation::new("a1 = alpha", &[("a1", 1), ("alpha", -1)]),
            Relation::new("a2 = beta", &[("a2", 1), ("beta", -1)]),
            Relation::new("a3 = 0", &[("a3", 1)]),
            Relation::new("a4 = 0", &[("a4", 1)]),
            Relation::new("c1 = gamma", &[("c1", 1), ("gamma", -1)]),
            Relation::new("c2 = omega", &[("c2", 1), ("omega", -1)]),
            Relation::new("c3 = 0", &[("c3", 1)]),
            Relation::new("c4 = 0", &[("c4", 1)]),
            Relation::new("b1 = alpha - t", &[("b1", 1), ("alpha", -1), ("b4", 1)]),
            Relation::new(
                "b2 = beta - gamma + alpha - t",
                &[("b2", 1), ("beta", -1), ("gamma", 1), ("alpha", -1), ("b4", 1)],
            ),
            Relation::new("b3 = gamma - alpha + t", &[("b3", 1), ("gamma", -1), ("alpha", 1), ("b4", -1)]),
        ]);
    }
    if max_degree >= 3 {
        out.push(Relation::new("b1 = 0", &[("b1", 1)]));
        out.push(Relation::new("b2 = 0", &[("b2", 1)]));
    }
    out
}

/// `c_{s,t}`: the coefficient of `|x^s| ⊗ |x^t|` in `c(x* ⊗ x^{s+t+1})`.
pub fn n1_coefficient<C: Cochain<NecklacePair> + ?Sized>(c: &C, s: usize, t: usize) -> Rational {
    let e = DerBasisElem::new(1, Word::from_slice(&vec![1; s + t + 1]));
    c.eval_basis(&e).coeff(&power_pair(s, t))
}

/// `(l−k) c_{s,t} = (s−k) c_{s−k,t} + (t−k) c_{s,t−k} − (s−l) c_{s−l,t} − (t−l) c_{s,t−l}`,
/// with `c` vanishing at negative indices.
pub fn n1_recursion_check(l: i64, k: i64, s: i64, t: i64, coeff: &dyn Fn(i64, i64) -> Rational) -> Result<()> {
    if s + t != l + k {
        return Err(Error::UnsupportedRange(format!("need s + t = l + k (l={l}, k={k}, s={s}, t={t})")));
    }
    let c = |s: i64, t: i64| if s < 0 || t < 0 { Rational::zero() } else { coeff(s, t) };
    let lhs = int(l - k) * c(s, t);
    let rhs = int(s - k) * c(s - k, t) + int(t - k) * c(s, t - k) - int(s - l) * c(s - l, t) - int(t - l) * c(s, t - l);
    if lhs == rhs {
        Ok(())
    } else {
        Err(Error::Verification(format!(
            "recursion fails at (l, k, s, t) = ({l}, {k}, {s}, {t}): {} != {}",
            format_rational(&lhs),
            format_rational(&rhs)
        )))
    }
}

/// Runs [`n1_recursion_check`] on every `k, l ≥ −1`, `0 ≤ k + l ≤ max_total`,
/// `s + t = k + l`; returns the number of instances.
pub fn n1_recursion_sweep(max_total: i64, coeff: &dyn Fn(i64, i64) -> Rational) -> Result<usize> {
    let mut count = 0;
    for k in -1..=max_total + 1 {
        for l in -1..=max_total + 1 {
            if k + l < 0 || k + l > max_total {
                continue;
            }
            for s in 0..=k + l {
                n1_recursion_check(l, k, s, k + l - s, coeff)?;
                count += 1;
            }
        }
    }
    Ok(count)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlTraceReport {
    pub off_diagonal_zero: bool,
    pub diagonal_scalar: bool,
    pub diagonal_equal: bool,
    /// Coefficient of the unit key in `c(E_11)`.
    #[serde(serialize_with = "ser_rational")]
    pub a: Rational,
}

fn ser_rational<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(&format_rational(q))
}

impl GlTraceReport {
    pub fn passed(&self) -> bool {
        self.off_diagonal_zero && self.diagonal_scalar && self.diagonal_equal
    }
}

/// Checks that `c(E_ij) = 0` for `i ≠ j` and `c(E_ii) = a · 1` for a common `a`.
pub fn gl_trace_check<K: TargetKey, C: Cochain<K> + ?Sized>(c: &C, alphabet: Alphabet) -> GlTraceReport {
    let unit = K::unit();
    let e = |i: u8, j: u8| c.eval_basis(&DerBasisElem::new(j, Word::letter(i)));
    let mut off_diagonal_zero = true;
    let mut diagonal_scalar = true;
    let mut diagonal = Vec::new();
    for i in alphabet.letters() {
        for j in alphabet.letters() {
            let v = e(i, j);
            if i != j {
                off_diagonal_zero &= v.is_zero();
            } else {
                diagonal_scalar &= v.keys().all(|k| *k == unit);
                diagonal.push(v.coeff(&unit));
            }
        }
    }
    GlTraceReport {
        off_diagonal_zero,
        diagonal_scalar,
        diagonal_equal: diagonal.windows(2).all(|w| w[0] == w[1]),
        a: diagonal.first().cloned().unwrap_or_else(Rational::zero),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModeConsistency {
    pub full_dimension: usize,
    pub equivariant_dimension: usize,
    /// `dim(full solutions ∩ equivariant cochains)`.
    pub intersection_dimension: usize,
    pub equivariant_in_full: bool,
}

impl ModeConsistency {
    pub fn consistent(&self) -> bool {
        self.equivariant_in_full && self.intersection_dimension == self.equivariant_dimension
    }
}

/// Compares the full-mode and equivariant-mode solution spaces (`|T|⊗|T|` target).
pub fn mode_consistency(alphabet: Alphabet, max_degree: usize, opts: &SolveOptions) -> Result<ModeConsistency> {
    let full_ansatz = CochainAnsatz::new(alphabet, Mode::Full, Target::Bicyclic, max_degree);
    let eq_ansatz = CochainAnsatz::new(alphabet, Mode::Equivariant, Target::Bicyclic, max_degree);
    let full = solve_generic::<NecklacePair>(&full_ansatz, opts)?;
    let eq = solve_generic::<NecklacePair>(&eq_ansatz, opts)?;
    let units: Vec<_> = (0..eq_ansatz.len())
        .map(|u| {
            let mut v = vec![Rational::zero(); eq_ansatz.len()];
            v[u] = Rational::one();
            let c = eq_ansatz.cochain::<NecklacePair>(&v).expect("matching target");
            table(&c, &full.elems)
        })
        .collect();
    let mut tables = full.tables.clone();
    tables.extend(eq.tables.iter().cloned());
    tables.extend(units);
    let vectors = to_vectors(&tables);
    let (f, rest) = vectors.split_at(full.tables.len());
    let (s, e) = rest.split_at(eq.tables.len());
    let dim_f = f.len();
    let dim_e = span_dimension(e)?;
    let f_plus_e = span_dimension(&[f, e].concat())?;
    let f_plus_s = span_dimension(&[f, s].concat())?;
    Ok(ModeConsistency {
        full_dimension: dim_f,
        equivariant_dimension: s.len(),
        intersection_dimension: dim_f + dim_e - f_plus_e,
        equivariant_in_full: f_plus_s == dim_f,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divergence::{n1_classical_cocycles, Div, ZeroCochain};

    #[test]
    fn recursion_on_classical_tables() {
        let a = Alphabet::new(1).unwrap();
        for c in n1_classical_cocycles(a).unwrap() {
            let f = |s: i64, t: i64| int(c.coefficient(s as usize, t as usize));
            assert!(n1_recursion_sweep(8, &f).unwrap() > 0, "{}", c.name());
            // (k, l, s, t) = (−1, 1, 0, 0) gives 2c00 = c10 + c01
            n1_recursion_check(1, -1, 0, 0, &f).unwrap();
            assert_eq!(int(2) * f(0, 0), f(1, 0) + f(0, 1));
            assert_eq!(n1_coefficient(&c, 2, 0), f(2, 0));
        }
    }

    #[test]
    fn recursion_rejects_bad_tables() {
        let f = |s: i64, _t: i64| int(s * s);
        let err = n1_recursion_sweep(4, &f).unwrap_err();
        assert!(err.to_string().contains("(l, k, s, t)"));
        assert!(n1_recursion_check(1, 1, 0, 0, &f).is_err());
    }

    #[test]
    fn gl_trace_examples() {
        let a = Alphabet::new(2).unwrap();
        let g = gl_trace_check(&Div, a);
        assert!(g.passed());
        assert_eq!(g.a, int(1));
        let z = gl_trace_check::<NecklacePair, _>(&ZeroCochain, a);
        assert!(z.passed());
        assert!(z.a.is_zero());
    }

    #[test]
    fn relations_hold_for_div() {
        let a = CochainAnsatz::new(Alphabet::new(3).unwrap(), Mode::Equivariant, Target::Bicyclic, 3);
        let mut div = vec![Rational::zero(); a.len()];
        for name in ["a", "beta", "gamma", "a2", "b3", "c1"] {
            div[a.index_of(name).unwrap()] = int(1);
        }
        assert!(equivariant_relations(3).iter().all(|r| r.holds(&a, &div)));
    }
}
