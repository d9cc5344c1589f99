//! Unknown coefficient spaces for degree-zero cochains.

use std::collections::HashMap;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::derivation::{enumerate_basis, DerBasisElem};
use crate::divergence::{Cochain, TargetKey};
use crate::error::{Error, Result};
use crate::linalg::Rational;
use crate::lincomb::LinComb;
use crate::tensor::{Alphabet, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `GL_n`-equivariant positional ansatz.
    Equivariant,
    /// One unknown per (basis derivation, target basis key).
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    /// `|T| ⊗ |T|`
    Bicyclic,
    /// `|T|`
    Cyclic,
}

impl Target {
    pub fn factors(self) -> usize {
        match self {
            Target::Bicyclic => 2,
            Target::Cyclic => 1,
        }
    }
}

macro_rules! string_enum {
    ($ty:ident { $($variant:ident => $name:literal),* }) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $($ty::$variant => $name),* })
            }
        }

        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok($ty::$variant),)*
                    _ => Err(Error::Parse(format!(concat!("unknown ", stringify!($ty), " {:?}"), s))),
                }
            }
        }
    };
}

string_enum!(Mode { Equivariant => "equivariant", Full => "full" });
string_enum!(Target { Bicyclic => "bicyclic", Cyclic => "cyclic" });

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Slot {
    /// `δ_{i0, w[position]}` times the key whose factors read the word at the
    /// listed positions (0-based, each factor in cyclic order).
    Positional { position: usize, factors: Vec<Vec<usize>> },
    /// Coefficient of the `target_index`-th target basis key in `c(elem)`.
    Table { elem: DerBasisElem, target_index: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unknown {
    pub name: String,
    pub degree: usize,
    pub slot: Slot,
}

#[derive(Clone, Debug)]
pub struct CochainAnsatz {
    alphabet: Alphabet,
    mode: Mode,
    target: Target,
    max_degree: usize,
    unknowns: Vec<Unknown>,
    ranges: Vec<Range<usize>>,
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, first);
            out.push(p);
        }
    }
    out
}

/// Cyclic orders of `group`, each written starting from its smallest entry.
fn cyclic_orders(group: &[usize]) -> Vec<Vec<usize>> {
    match group.split_first() {
        None => vec![Vec::new()],
        Some((&head, rest)) => permutations(rest)
            .into_iter()
            .map(|mut p| {
                p.insert(0, head);
                p
            })
            .collect(),
    }
}

/// Every arrangement of `slots` into `factors` cyclically ordered factors,
/// sorted by number of nonempty factors, then factor sizes (descending),
/// then the slot lists.
pub(crate) fn arrangements(slots: &[usize], factors: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for assign in 0..factors.pow(slots.len() as u32) {
        let mut groups = vec![Vec::new(); factors];
        let mut code = assign;
        for &s in slots {
            groups[code % factors].push(s);
            code /= factors;
        }
        let mut partial: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
        for g in &groups {
            let orders = cyclic_orders(g);
            partial = partial
                .into_iter()
                .flat_map(|p| {
                    orders.iter().map(move |o| {
                        let mut q = p.clone();
                        q.push(o.clone());
                        q
                    })
                })
                .collect();
        }
        out.extend(partial);
    }
    out.sort_by(|a, b| {
        let key = |p: &Vec<Vec<usize>>| {
            let nonempty = p.iter().filter(|f| !f.is_empty()).count();
            let sizes: Vec<std::cmp::Reverse<usize>> = p.iter().map(|f| std::cmp::Reverse(f.len())).collect();
            (nonempty, sizes)
        };
        key(a).cmp(&key(b)).then_with(|| a.cmp(b))
    });
    out
}

fn pattern_label(factors: &[Vec<usize>]) -> String {
    factors
        .iter()
        .map(|f| {
            if f.is_empty() {
                "|e|".to_string()
            } else {
                let inner: Vec<String> = f.iter().map(|s| (s + 1).to_string()).collect();
                format!("|{}|", inner.join("."))
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

fn positional_name(target: Target, degree: usize, position: usize, index: usize, factors: &[Vec<usize>]) -> String {
    match (target, degree) {
        (_, 0) => "a".to_string(),
        (Target::Bicyclic, 1) => ["alpha", "beta", "gamma", "omega"][position * 2 + index].to_string(),
        (Target::Bicyclic, 2) => format!("{}{}", ["a", "b", "c"][position], index + 1),
        _ => format!("p{}:{}", position + 1, pattern_label(factors)),
    }
}

fn full_unknowns<K: TargetKey>(alphabet: Alphabet, degree: usize) -> Vec<Unknown> {
    let keys = K::basis(alphabet, degree);
    enumerate_basis(alphabet, degree as i64)
        .into_iter()
        .flat_map(|elem| {
            keys.iter().enumerate().map(move |(target_index, key)| Unknown {
                name: format!("{elem}->{key}"),
                degree,
                slot: Slot::Table {
                    elem: elem.clone(),
                    target_index,
                },
            })
        })
        .collect()
}

impl CochainAnsatz {
    pub fn new(alphabet: Alphabet, mode: Mode, target: Target, max_degree: usize) -> Self {
        let mut unknowns = Vec::new();
        let mut ranges = Vec::new();
        for degree in 0..=max_degree {
            let start = unknowns.len();
            match mode {
                Mode::Equivariant => {
                    for position in 0..=degree {
                        let slots: Vec<usize> = (0..=degree).filter(|&s| s != position).collect();
                        for (index, factors) in arrangements(&slots, target.factors()).into_iter().enumerate() {
                            unknowns.push(Unknown {
                                name: positional_name(target, degree, position, index, &factors),
                                degree,
                                slot: Slot::Positional { position, factors },
                            });
                        }
                    }
                }
                Mode::Full => unknowns.extend(match target {
                    Target::Bicyclic => full_unknowns::<crate::cyclic::NecklacePair>(alphabet, degree),
                    Target::Cyclic => full_unknowns::<crate::cyclic::Necklace>(alphabet, degree),
                }),
            }
            ranges.push(start..unknowns.len());
        }
        Self {
            alphabet,
            mode,
            target,
            max_degree,
            unknowns,
            ranges,
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn target(&self) -> Target {
        self.target
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn unknowns(&self) -> &[Unknown] {
        &self.unknowns
    }

    pub fn len(&self) -> usize {
        self.unknowns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unknowns.is_empty()
    }

    pub fn degree_range(&self, degree: usize) -> Range<usize> {
        self.ranges.get(degree).cloned().unwrap_or(0..0)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.unknowns.iter().position(|u| u.name == name)
    }

    /// The cochain obtained by substituting `coeffs` for the unknowns.
    pub fn cochain<K: TargetKey>(&self, coeffs: &[Rational]) -> Result<AnsatzCochain<K>> {
        if coeffs.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: coeffs.len(),
            });
        }
        Ok(AnsatzCochain {
            model: Arc::new(Model::new(self)?),
            coeffs: coeffs.to_vec(),
        })
    }
}

/// Evaluation of the unknowns on basis derivations, specialized to a key type.
pub(crate) struct Model<K: TargetKey> {
    pub(crate) ansatz: CochainAnsatz,
    targets: Vec<Vec<K>>,
    elem_index: Vec<HashMap<DerBasisElem, usize>>,
}

impl<K: TargetKey> Model<K> {
    pub(crate) fn new(ansatz: &CochainAnsatz) -> Result<Self> {
        if K::FACTORS != ansatz.target.factors() {
            return Err(Error::DimensionMismatch {
                expected: ansatz.target.factors(),
                found: K::FACTORS,
            });
        }
        let (targets, elem_index) = match ansatz.mode {
            Mode::Equivariant => (Vec::new(), Vec::new()),
            Mode::Full => (0..=ansatz.max_degree)
                .map(|d| {
                    let index = enumerate_basis(ansatz.alphabet, d as i64)
                        .into_iter()
                        .enumerate()
                        .map(|(i, e)| (e, i))
                        .collect();
                    (K::basis(ansatz.alphabet, d), index)
                })
                .unzip(),
        };
        Ok(Self {
            ansatz: ansatz.clone(),
            targets,
            elem_index,
        })
    }

    /// `c(e) = Σ x_u · key_u` over the returned `(u, key_u)`.
    pub(crate) fn sym(&self, e: &DerBasisElem) -> Vec<(usize, K)> {
        let d = e.degree();
        if d < 0 || d as usize > self.ansatz.max_degree {
            return Vec::new();
        }
        let d = d as usize;
        let range = self.ansatz.degree_range(d);
        match self.ansatz.mode {
            Mode::Equivariant => {
                let w = e.word.letters();
                range
                    .filter_map(|u| match &self.ansatz.unknowns[u].slot {
                        Slot::Positional { position, factors } if w[*position] == e.dual => {
                            let words: Vec<Word> = factors
                                .iter()
                                .map(|f| Word::from_slice(&f.iter().map(|&s| w[s]).collect::<Vec<_>>()))
                                .collect();
                            Some((u, K::from_factors(&words)))
                        }
                        _ => None,
                    })
                    .collect()
            }
            Mode::Full => {
                let Some(&i) = self.elem_index[d].get(e) else {
                    return Vec::new();
                };
                let keys = &self.targets[d];
                let start = range.start + i * keys.len();
                keys.iter().enumerate().map(|(k, key)| (start + k, key.clone())).collect()
            }
        }
    }

    pub(crate) fn eval_with(&self, coeffs: &[Rational], e: &DerBasisElem) -> LinComb<K> {
        self.sym(e)
            .into_iter()
            .filter(|(u, _)| !coeffs[*u].is_zero())
            .map(|(u, k)| (k, coeffs[u].clone()))
            .collect()
    }
}

/// A cochain given by concrete values of the ansatz unknowns.
#[derive(Clone)]
pub struct AnsatzCochain<K: TargetKey> {
    pub(crate) model: Arc<Model<K>>,
    pub(crate) coeffs: Vec<Rational>,
}

impl<K: TargetKey> AnsatzCochain<K> {
    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coefficient(&self, name: &str) -> Option<&Rational> {
        self.model.ansatz.index_of(name).map(|i| &self.coeffs[i])
    }
}

impl<K: TargetKey> Cochain<K> for AnsatzCochain<K> {
    fn eval_basis(&self, e: &DerBasisElem) -> LinComb<K> {
        self.model.eval_with(&self.coeffs, e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arrangement_counts() {
        let counts: Vec<usize> = (0..=4)
            .map(|d| arrangements(&(0..d).collect::<Vec<_>>(), 2).len())
            .collect();
        // Σ_j C(d, j) f(j) f(d−j) with f(0) = 1, f(m) = (m−1)!
        assert_eq!(counts, vec![1, 2, 4, 10, 34]);
        let cyc: Vec<usize> = (0..=4)
            .map(|d| arrangements(&(0..d).collect::<Vec<_>>(), 1).len())
            .collect();
        assert_eq!(cyc, vec![1, 1, 1, 2, 6]);
    }

    #[test]
    fn degree_two_naming_follows_pattern_order() {
        let a = CochainAnsatz::new(Alphabet::new(3).unwrap(), Mode::Equivariant, Target::Bicyclic, 3);
        assert_eq!(a.len(), 1 + 2 * 2 + 3 * 4 + 4 * 10);
        let names: Vec<&str> = a.unknowns()[..17].iter().map(|u| u.name.as_str()).collect();
        assert_eq!(
            names,
            [
                "a", "alpha", "beta", "gamma", "omega", "a1", "a2", "a3", "a4", "b1", "b2", "b3", "b4", "c1", "c2",
                "c3", "c4"
            ]
        );
        // b3 reads |w1| ⊗ |w3|, b4 reads |w3| ⊗ |w1|
        let b3 = &a.unknowns()[a.index_of("b3").unwrap()];
        assert_eq!(
            b3.slot,
            Slot::Positional {
                position: 1,
                factors: vec![vec![0], vec![2]]
            }
        );
        assert_eq!(a.unknowns()[17].name, "p1:|2.3.4|*|e|");
    }

    #[test]
    fn full_mode_sizes() {
        let a = CochainAnsatz::new(Alphabet::new(1).unwrap(), Mode::Full, Target::Bicyclic, 3);
        assert_eq!(a.len(), 1 + 2 + 3 + 4);
        assert!(a.cochain::<crate::cyclic::Necklace>(&vec![Rational::zero(); a.len()]).is_err());
    }
}
