//! Degree-zero 1-cocycles `c` on `Der(T(A_n))` as the kernel of an exact
//! linear system.
//!
//! The unknowns come from a [`CochainAnsatz`]. Every generating pair of basis
//! derivations `(d1, d2)` contributes the rows
//! `coord_N(d1·c(d2) − d2·c(d1) − c([d1, d2])) = 0`, one per target key `N`.

mod ansatz;
mod checks;

pub use ansatz::{AnsatzCochain, CochainAnsatz, Mode, Slot, Target, Unknown};
pub use checks::{
    equivariant_relations, gl_trace_check, mode_consistency, n1_coefficient, n1_recursion_check,
    n1_recursion_sweep, GlTraceReport, ModeConsistency, Relation,
};

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use num_traits::Zero;
use rand::Rng;
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize};

use crate::cyclic::{Necklace, NecklacePair};
use crate::derivation::{bracket_basis, enumerate_basis, DerBasisElem};
use crate::divergence::{coboundary, n1_classical_cocycles, Cochain, Div, SigmaDiv, TargetKey};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::linalg::{express_in_span, format_rational, nullspace, span_dimension, Rational, SparseMatrix, SparseVector, SpanTracker};
use crate::lincomb::LinComb;
use crate::random::{random_derivation, seeded};
use crate::tensor::Alphabet;

use ansatz::Model;

/// Which basis pairs `(d1, d2)` generate the constraint rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct PairPolicy {
    /// Degrees allowed for `d1`.
    pub left_degrees: Vec<i64>,
    /// Keep both `(d1, d2)` and `(d2, d1)` when both degrees are allowed on the left.
    pub ordered: bool,
}

impl Default for PairPolicy {
    fn default() -> Self {
        Self {
            left_degrees: vec![-1, 0, 1, 2],
            ordered: false,
        }
    }
}

pub fn generating_pairs(alphabet: Alphabet, max_degree: usize, policy: &PairPolicy) -> Vec<(DerBasisElem, DerBasisElem)> {
    let max = max_degree as i64;
    let by_degree: Vec<Vec<DerBasisElem>> = (-1..=max).map(|k| enumerate_basis(alphabet, k)).collect();
    let level = |k: i64| &by_degree[(k + 1) as usize];
    let mut pairs = Vec::new();
    let mut lefts: Vec<i64> = policy.left_degrees.iter().copied().filter(|&p| (-1..=max).contains(&p)).collect();
    lefts.sort_unstable();
    lefts.dedup();
    for &p in &lefts {
        for q in -1..=max.min(max - p) {
            if p + q < -1 {
                continue;
            }
            let symmetric = !policy.ordered && lefts.contains(&q);
            for a in level(p) {
                for b in level(q) {
                    if a == b || (symmetric && a > b) {
                        continue;
                    }
                    pairs.push((a.clone(), b.clone()));
                }
            }
        }
    }
    pairs
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub exec: Execution,
    pub policy: PairPolicy,
    /// Seed for the fresh-pair re-verification.
    pub seed: u64,
    pub fresh_pairs: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            exec: Execution::default(),
            policy: PairPolicy::default(),
            seed: 0,
            fresh_pairs: 100,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    pub matrix: SparseMatrix,
    pub pairs: usize,
}

fn pair_rows<K: TargetKey>(model: &Model<K>, a: &DerBasisElem, b: &DerBasisElem) -> Vec<SparseVector> {
    let mut acc: LinComb<(K, usize)> = LinComb::zero();
    for (u, key) in model.sym(b) {
        for (k, c) in &K::act(a, &key) {
            acc.add_term((k.clone(), u), c.clone());
        }
    }
    for (u, key) in model.sym(a) {
        for (k, c) in &K::act(b, &key) {
            acc.add_term((k.clone(), u), -c.clone());
        }
    }
    for (e, c) in &bracket_basis(a, b) {
        for (u, key) in model.sym(e) {
            acc.add_term((key, u), -c.clone());
        }
    }
    let width = model.ansatz.len();
    let mut rows = Vec::new();
    let mut current: Option<&K> = None;
    let mut entries = Vec::new();
    for ((k, u), c) in &acc {
        if current != Some(k) {
            if !entries.is_empty() {
                rows.push(SparseVector::from_entries(width, entries.drain(..)).expect("unknown index in range"));
            }
            current = Some(k);
        }
        entries.push((*u, c.clone()));
    }
    if !entries.is_empty() {
        rows.push(SparseVector::from_entries(width, entries).expect("unknown index in range"));
    }
    rows
}

fn build_generic<K: TargetKey>(model: &Model<K>, pairs: &[(DerBasisElem, DerBasisElem)], exec: Execution) -> Result<SparseMatrix> {
    let rows = exec.flat_map(pairs, |(a, b)| pair_rows(model, a, b));
    SparseMatrix::from_rows(model.ansatz.len(), &rows)
}

/// Assembles the cocycle constraints for `ansatz` over the pairs of `policy`.
pub fn build_system(ansatz: &CochainAnsatz, policy: &PairPolicy, exec: Execution) -> Result<ConstraintSystem> {
    let pairs = generating_pairs(ansatz.alphabet(), ansatz.max_degree(), policy);
    let matrix = match ansatz.target() {
        Target::Bicyclic => build_generic(&Model::<NecklacePair>::new(ansatz)?, &pairs, exec)?,
        Target::Cyclic => build_generic(&Model::<Necklace>::new(ansatz)?, &pairs, exec)?,
    };
    Ok(ConstraintSystem {
        matrix,
        pairs: pairs.len(),
    })
}

/// Values of a cochain on every basis derivation of degree `0..=max`, keyed by
/// (position in `elems`, target key).
pub(crate) fn table<K: TargetKey, C: Cochain<K> + ?Sized>(c: &C, elems: &[DerBasisElem]) -> LinComb<(usize, K)> {
    let mut out = LinComb::zero();
    for (i, e) in elems.iter().enumerate() {
        for (k, v) in &c.eval_basis(e) {
            out.add_term((i, k.clone()), v.clone());
        }
    }
    out
}

/// Writes tables as vectors over the union of their supports.
pub(crate) fn to_vectors<K: TargetKey>(tables: &[LinComb<(usize, K)>]) -> Vec<SparseVector> {
    let keys: BTreeSet<&(usize, K)> = tables.iter().flat_map(|t| t.keys()).collect();
    let index: HashMap<&(usize, K), usize> = keys.into_iter().enumerate().map(|(i, k)| (k, i)).collect();
    tables
        .iter()
        .map(|t| {
            SparseVector::from_entries(index.len(), t.iter().map(|(k, v)| (index[k], v.clone()))).expect("indexed support")
        })
        .collect()
}

pub(crate) fn cochain_elements(alphabet: Alphabet, max_degree: usize) -> Vec<DerBasisElem> {
    (0..=max_degree as i64).flat_map(|k| enumerate_basis(alphabet, k)).collect()
}

pub(crate) struct Solved<K: TargetKey> {
    pub(crate) model: Arc<Model<K>>,
    pub(crate) pairs: usize,
    pub(crate) rows: usize,
    pub(crate) rank: usize,
    pub(crate) kernel_dimension: usize,
    pub(crate) basis: Vec<Vec<Rational>>,
    pub(crate) elems: Vec<DerBasisElem>,
    pub(crate) tables: Vec<LinComb<(usize, K)>>,
}

impl<K: TargetKey> Solved<K> {
    pub(crate) fn cochain(&self, i: usize) -> AnsatzCochain<K> {
        AnsatzCochain {
            model: self.model.clone(),
            coeffs: self.basis[i].clone(),
        }
    }
}

pub(crate) fn solve_generic<K: TargetKey>(ansatz: &CochainAnsatz, opts: &SolveOptions) -> Result<Solved<K>> {
    let model = Arc::new(Model::<K>::new(ansatz)?);
    let pairs = generating_pairs(ansatz.alphabet(), ansatz.max_degree(), &opts.policy);
    let matrix = build_generic(&model, &pairs, opts.exec)?;
    let ns = nullspace(&matrix);
    let elems = cochain_elements(ansatz.alphabet(), ansatz.max_degree());
    let candidates: Vec<Vec<Rational>> = ns.basis.iter().map(SparseVector::to_dense).collect();
    let candidate_tables: Vec<LinComb<(usize, K)>> = opts.exec.map(&candidates, |v| {
        let c = AnsatzCochain {
            model: model.clone(),
            coeffs: v.clone(),
        };
        table(&c, &elems)
    });
    let vectors = to_vectors(&candidate_tables);
    let mut span = SpanTracker::new(vectors.first().map_or(0, SparseVector::len));
    let mut basis = Vec::new();
    let mut tables = Vec::new();
    for ((v, t), vec) in candidates.into_iter().zip(candidate_tables).zip(&vectors) {
        if span.insert(vec)? {
            basis.push(v);
            tables.push(t);
        }
    }
    let solved = Solved {
        model,
        pairs: pairs.len(),
        rows: matrix.nrows(),
        rank: ansatz.len() - ns.dimension(),
        kernel_dimension: ns.dimension(),
        basis,
        elems,
        tables,
    };
    verify_fresh_pairs(&solved, opts)?;
    Ok(solved)
}

/// Re-checks every basis cochain on seeded random homogeneous pairs.
fn verify_fresh_pairs<K: TargetKey>(solved: &Solved<K>, opts: &SolveOptions) -> Result<()> {
    let ansatz = &solved.model.ansatz;
    let max = ansatz.max_degree() as i64;
    let mut rng = seeded(opts.seed);
    let samples: Vec<_> = (0..opts.fresh_pairs)
        .map(|_| {
            let p = rng.gen_range(-1..=max);
            let q = rng.gen_range(-1..=max.min(max - p));
            let d1 = random_derivation(&mut rng, ansatz.alphabet(), p, 3);
            let d2 = random_derivation(&mut rng, ansatz.alphabet(), q, 3);
            (d1, d2)
        })
        .collect();
    let cochains: Vec<AnsatzCochain<K>> = (0..solved.basis.len()).map(|i| solved.cochain(i)).collect();
    let failures = opts.exec.map(&samples, |(d1, d2)| {
        cochains.iter().enumerate().find_map(|(i, c)| match coboundary(c, d1, d2) {
            Ok(r) if r.is_zero() => None,
            Ok(r) => Some(format!("basis cochain {i} fails on d1 = {d1}, d2 = {d2}: residual {r}")),
            Err(e) => Some(e.to_string()),
        })
    });
    match failures.into_iter().flatten().next() {
        Some(msg) => Err(Error::Verification(msg)),
        None => Ok(()),
    }
}

/// Ordered `name → value` map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientMap(pub Vec<(String, Rational)>);

impl CoefficientMap {
    pub fn get(&self, name: &str) -> Option<&Rational> {
        self.0.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }
}

impl Serialize for CoefficientMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, &format_rational(v))?;
        }
        m.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: Option<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Identification {
    pub references: Vec<String>,
    /// Coordinates of each basis cochain in the references, if it lies in their span.
    pub coordinates: Vec<Option<Vec<String>>>,
    /// The solution space equals the span of the references.
    pub spans_references: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolverReport {
    pub n: usize,
    pub mode: Mode,
    pub target: Target,
    pub max_degree: usize,
    /// Set for `n = 2`, or when `max_degree > n ≥ 2`.
    pub exploratory: bool,
    pub unknowns: usize,
    pub pairs: usize,
    pub rows: usize,
    pub rank: usize,
    pub kernel_dimension: usize,
    pub dimension: usize,
    pub basis: Vec<CoefficientMap>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identification: Option<Identification>,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub basis_vectors: Vec<Vec<Rational>>,
}

impl SolverReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn coefficient_maps(ansatz: &CochainAnsatz, basis: &[Vec<Rational>]) -> Vec<CoefficientMap> {
    basis
        .iter()
        .map(|v| {
            CoefficientMap(
                ansatz
                    .unknowns()
                    .iter()
                    .zip(v)
                    .filter(|(_, c)| ansatz.mode() == Mode::Equivariant || !c.is_zero())
                    .map(|(u, c)| (u.name.clone(), c.clone()))
                    .collect(),
            )
        })
        .collect()
}

pub(crate) fn identify<K: TargetKey>(
    solved: &Solved<K>,
    references: &[(&str, &dyn Cochain<K>)],
) -> Result<Identification> {
    let mut tables = solved.tables.clone();
    tables.extend(references.iter().map(|(_, c)| table(*c, &solved.elems)));
    let vectors = to_vectors(&tables);
    let (basis_vecs, ref_vecs) = vectors.split_at(solved.tables.len());
    let coordinates = basis_vecs
        .iter()
        .map(|v| {
            express_in_span(ref_vecs, v)
                .map(|o| o.map(|coords| coords.iter().map(format_rational).collect()))
        })
        .collect::<Result<Vec<_>>>()?;
    let dim_refs = span_dimension(ref_vecs)?;
    let dim_all = span_dimension(&vectors)?;
    Ok(Identification {
        references: references.iter().map(|(n, _)| n.to_string()).collect(),
        coordinates,
        spans_references: dim_refs == basis_vecs.len() && dim_all == dim_refs,
    })
}

fn report_from<K: TargetKey>(ansatz: &CochainAnsatz, solved: &Solved<K>, opts: &SolveOptions) -> SolverReport {
    let n = ansatz.alphabet().size();
    SolverReport {
        n,
        mode: ansatz.mode(),
        target: ansatz.target(),
        max_degree: ansatz.max_degree(),
        exploratory: n == 2 || (n >= 2 && ansatz.max_degree() > n),
        unknowns: ansatz.len(),
        pairs: solved.pairs,
        rows: solved.rows,
        rank: solved.rank,
        kernel_dimension: solved.kernel_dimension,
        dimension: solved.basis.len(),
        basis: coefficient_maps(ansatz, &solved.basis),
        identification: None,
        checks: vec![Check::new(
            "fresh-pair verification",
            true,
            Some(format!("{} seeded pairs (seed {})", opts.fresh_pairs, opts.seed)),
        )],
        basis_vectors: solved.basis.clone(),
    }
}

fn gl_checks<K: TargetKey>(solved: &Solved<K>, report: &mut SolverReport) {
    for i in 0..solved.basis.len() {
        let g = gl_trace_check(&solved.cochain(i), solved.model.ansatz.alphabet());
        report.checks.push(Check::new(
            format!("gl trace, basis cochain {i}"),
            g.passed(),
            Some(format!("a = {}", format_rational(&g.a))),
        ));
    }
}

/// Computes the space of degree-zero 1-cocycles described by `ansatz`.
pub fn solve(ansatz: &CochainAnsatz, opts: &SolveOptions) -> Result<SolverReport> {
    let n = ansatz.alphabet().size();
    match ansatz.target() {
        Target::Bicyclic => {
            let solved = solve_generic::<NecklacePair>(ansatz, opts)?;
            let mut report = report_from(ansatz, &solved, opts);
            let identification = if n == 1 {
                let [a, b, c] = n1_classical_cocycles(ansatz.alphabet())?;
                identify(&solved, &[(a.name(), &a), (b.name(), &b), (c.name(), &c)])?
            } else {
                identify(&solved, &[("Div", &Div), ("σ∘Div", &SigmaDiv)])?
            };
            if !report.exploratory {
                report.checks.push(Check::new(
                    format!("solution space = span{{{}}}", identification.references.join(", ")),
                    identification.spans_references,
                    None,
                ));
            }
            report.identification = Some(identification);
            if ansatz.mode() == Mode::Equivariant && n >= 3 {
                let relations = equivariant_relations(ansatz.max_degree());
                for r in relations {
                    let failing: Vec<usize> = (0..solved.basis.len())
                        .filter(|&i| !r.holds(ansatz, &solved.basis[i]))
                        .collect();
                    let detail = (!failing.is_empty()).then(|| format!("fails on basis cochains {failing:?}"));
                    report.checks.push(Check::new(r.label.clone(), failing.is_empty(), detail));
                }
            }
            if ansatz.mode() == Mode::Full && n >= 2 {
                gl_checks(&solved, &mut report);
            }
            Ok(report)
        }
        Target::Cyclic => {
            let solved = solve_generic::<Necklace>(ansatz, opts)?;
            let mut report = report_from(ansatz, &solved, opts);
            if ansatz.mode() == Mode::Full && n >= 2 {
                gl_checks(&solved, &mut report);
            }
            Ok(report)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    fn opts() -> SolveOptions {
        SolveOptions {
            fresh_pairs: 30,
            ..SolveOptions::default()
        }
    }

    #[test]
    fn pair_policy_bounds() {
        let a = Alphabet::new(2).unwrap();
        let pairs = generating_pairs(a, 2, &PairPolicy::default());
        assert!(pairs.iter().all(|(x, y)| x.degree() + y.degree() <= 2 && x != y));
        assert!(pairs.iter().all(|(x, _)| x.degree() <= 2));
        let ordered = generating_pairs(a, 2, &PairPolicy { ordered: true, ..PairPolicy::default() });
        assert!(ordered.len() > pairs.len());
    }

    #[test]
    fn degree_one_relations_n3() {
        let a = CochainAnsatz::new(Alphabet::new(3).unwrap(), Mode::Equivariant, Target::Bicyclic, 1);
        let r = solve(&a, &opts()).unwrap();
        // a, alpha, gamma free; beta = a − alpha, omega = a − gamma
        assert_eq!(r.dimension, 3);
        for b in &r.basis {
            let g = |n: &str| b.get(n).cloned().unwrap();
            assert_eq!(g("alpha") + g("beta"), g("a"));
            assert_eq!(g("gamma") + g("omega"), g("a"));
        }
    }

    #[test]
    fn div_is_in_the_n3_solution_space() {
        let a = CochainAnsatz::new(Alphabet::new(3).unwrap(), Mode::Equivariant, Target::Bicyclic, 2);
        let r = solve(&a, &opts()).unwrap();
        assert_eq!(r.dimension, 4);
        let id = r.identification.unwrap();
        assert!(!id.spans_references);
        let m = build_system(&a, &PairPolicy::default(), Execution::Sequential).unwrap();
        let mut div = vec![Rational::zero(); a.len()];
        for name in ["a", "beta", "gamma", "a2", "b3", "c1"] {
            div[a.index_of(name).unwrap()] = int(1);
        }
        assert!(m.matrix.mul_vec(&SparseVector::from_dense(&div)).unwrap().is_zero());
    }

    #[test]
    fn execution_strategies_agree() {
        let a = CochainAnsatz::new(Alphabet::new(2).unwrap(), Mode::Equivariant, Target::Bicyclic, 2);
        let seq = build_system(&a, &PairPolicy::default(), Execution::Sequential).unwrap();
        let par = build_system(&a, &PairPolicy::default(), Execution::Parallel).unwrap();
        assert_eq!(seq.matrix, par.matrix);
    }

    #[test]
    fn deterministic_reports() {
        let a = CochainAnsatz::new(Alphabet::new(1).unwrap(), Mode::Full, Target::Bicyclic, 4);
        let x = serde_json::to_string(&solve(&a, &opts()).unwrap()).unwrap();
        let y = serde_json::to_string(&solve(&a, &opts()).unwrap()).unwrap();
        assert_eq!(x, y);
    }
}
