//! Degreewise bases of `Der_Sp`, the degree-zero cocycle solve on them, and
//! the `sp`-intertwiner check `∧³H → H`.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use super::lyndon::{expansion, lyndon_coordinates, lyndon_words};
use super::{es_trace, phi_bar_3, phi_inject, wedge3_basis, witt_dimension, HElement, SpDerivation, SymplecticContext};
use crate::cyclic::{necklaces, CyclicPoly, Necklace};
use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::linalg::{
    express_in_span, format_rational, int, nullspace, span_dimension, Nullspace, Rational, SparseMatrix, SparseVector,
};
use crate::lincomb::LinComb;
use crate::random::seeded;
use crate::solver::Check;
use crate::tensor::{commutator_terms, Letter, Word};

/// Basis of `Der_Sp(d)`: the kernel of `g* ⊗ P ↦ D(Σ_j [x_j, y_j])` inside
/// `H* ⊗ 𝔏(d + 1)`, in free-column form.
pub struct DerSpBasis {
    ctx: SymplecticContext,
    degree: usize,
    ambient: Vec<(Letter, Word)>,
    index: HashMap<(Letter, Word), usize>,
    nullspace: Nullspace,
    elements: Vec<SpDerivation>,
}

pub fn der_sp_basis(ctx: SymplecticContext, degree: usize) -> Result<DerSpBasis> {
    let lyndon = lyndon_words(ctx.alphabet(), degree + 1);
    let ambient: Vec<(Letter, Word)> = ctx
        .generators()
        .flat_map(|g| lyndon.iter().map(move |w| (g, w.clone())))
        .collect();
    let index: HashMap<(Letter, Word), usize> = ambient.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
    let n = ctx.n();
    let mut rows: HashMap<Word, usize> = HashMap::new();
    let mut triplets = Vec::new();
    for (col, (g, w)) in ambient.iter().enumerate() {
        let p = expansion(w);
        let image = if (*g as usize) <= n {
            commutator_terms(&p, &LinComb::basis(Word::letter(ctx.y(*g as usize))))
        } else {
            commutator_terms(&LinComb::basis(Word::letter(ctx.x(*g as usize - n))), &p)
        };
        for (v, c) in &image {
            let next = rows.len();
            let r = *rows.entry(v.clone()).or_insert(next);
            triplets.push((r, col, c.clone()));
        }
    }
    let s = SparseMatrix::from_triplets(rows.len(), ambient.len(), triplets)?;
    let nullspace = nullspace(&s);
    let elements = nullspace
        .basis
        .iter()
        .map(|v| {
            let terms = v.entries().iter().map(|(i, c)| (ambient[*i].clone(), c.clone())).collect();
            SpDerivation::from_terms_unchecked(ctx, terms)
        })
        .collect();
    Ok(DerSpBasis {
        ctx,
        degree,
        ambient,
        index,
        nullspace,
        elements,
    })
}

impl DerSpBasis {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dimension(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[SpDerivation] {
        &self.elements
    }

    /// `2n·W(2n, d+1) − W(2n, d+2)`, valid because the symplectic map is onto `𝔏(d+2)`.
    pub fn expected_dimension(&self) -> usize {
        let m = self.ctx.alphabet().size();
        m * witt_dimension(m, self.degree + 1) - witt_dimension(m, self.degree + 2)
    }

    fn ambient_vector(&self, terms: &LinComb<(Letter, Word)>) -> Result<SparseVector> {
        let entries = terms
            .iter()
            .map(|(k, c)| {
                self.index.get(k).map(|&i| (i, c.clone())).ok_or(Error::DegreeMismatch {
                    expected: self.degree as i64,
                    found: k.1.len() as i64 - 1,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        SparseVector::from_entries(self.ambient.len(), entries)
    }

    /// Coordinates of `d` in [`Self::elements`].
    pub fn coordinates(&self, d: &SpDerivation) -> Result<Vec<Rational>> {
        let v = self.ambient_vector(d.terms())?;
        let coords = self.nullspace.coordinates(&v);
        let mut back = LinComb::zero();
        for (e, c) in self.elements.iter().zip(&coords) {
            back.add_scaled(e.terms(), c);
        }
        if &back != d.terms() {
            return Err(Error::NotSymplectic);
        }
        Ok(coords)
    }

    /// Coordinates of a derivation of `T(H)` known to lie in `Der_Sp(d)`.
    fn coordinates_of_tensor(&self, d: &Derivation) -> Result<Vec<Rational>> {
        let mut terms = LinComb::zero();
        for g in self.ctx.generators() {
            for (w, c) in &lyndon_coordinates(&d.value_on(g))? {
                terms.add_term((g, w.clone()), c.clone());
            }
        }
        Ok(self.nullspace.coordinates(&self.ambient_vector(&terms)?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EsOptions {
    #[serde(skip)]
    pub exec: Execution,
    pub seed: u64,
    /// Random pairs of `φ(∧³H)` combinations for the direct trace check.
    pub trace_pairs: usize,
    /// Random pairs used to re-verify the kernel.
    pub fresh_pairs: usize,
    /// Always tabulate dimension against the cutoff, not only on excess.
    pub cutoff_table: bool,
}

impl Default for EsOptions {
    fn default() -> Self {
        Self {
            exec: Execution::default(),
            seed: 0,
            trace_pairs: 50,
            fresh_pairs: 20,
            cutoff_table: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutoffRow {
    pub max_degree: usize,
    pub unknowns: usize,
    pub rows: usize,
    pub dimension: usize,
    /// Dimension of the solution space restricted to degrees `≥ 2`.
    pub dimension_degree_ge2: Option<usize>,
    pub contains_trace: bool,
    pub contains_trace_degree_ge2: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EsUniquenessReport {
    pub n: usize,
    pub max_degree: usize,
    pub der_sp_dimensions: Vec<usize>,
    pub unknowns: usize,
    pub pairs: usize,
    pub rows: usize,
    pub rank: usize,
    pub dimension: usize,
    pub dimension_degree_ge2: Option<usize>,
    pub contains_trace: bool,
    pub contains_trace_degree_ge2: Option<bool>,
    /// Coordinates of the trace in the kernel basis, when it lies in the kernel.
    pub trace_coordinates: Option<Vec<String>>,
    /// Degree-1 values of the trace on the `Der_Sp(1)` basis.
    pub trace_degree_one: Vec<String>,
    /// Whether the degree-1 part of the trace, extended by zero, is itself a cocycle.
    pub trace_degree_one_part_is_cocycle: bool,
    pub excess: bool,
    pub cutoff_table: Vec<CutoffRow>,
    pub checks: Vec<Check>,
}

impl EsUniquenessReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

struct Layout {
    necks: Vec<Vec<Necklace>>,
    neck_index: Vec<HashMap<Necklace, usize>>,
    offsets: Vec<usize>,
    len: usize,
}

impl Layout {
    fn new(ctx: SymplecticContext, dims: &[usize]) -> Self {
        let necks: Vec<Vec<Necklace>> = (0..dims.len()).map(|d| necklaces(ctx.alphabet(), d)).collect();
        let neck_index = necks
            .iter()
            .map(|ns| ns.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect())
            .collect();
        let mut offsets = Vec::with_capacity(dims.len() + 1);
        let mut len = 0;
        for (d, dim) in dims.iter().enumerate() {
            offsets.push(len);
            len += dim * necks[d].len();
        }
        offsets.push(len);
        Self {
            necks,
            neck_index,
            offsets,
            len,
        }
    }

    fn var(&self, d: usize, b: usize, neck: usize) -> usize {
        self.offsets[d] + b * self.necks[d].len() + neck
    }

    fn restrict_from(&self, v: &SparseVector, d: usize) -> SparseVector {
        let start = self.offsets[d];
        SparseVector::from_entries(
            self.len - start,
            v.entries().iter().filter(|(i, _)| *i >= start).map(|(i, c)| (i - start, c.clone())),
        )
        .expect("indices in range")
    }
}

struct Context {
    ctx: SymplecticContext,
    bases: Vec<DerSpBasis>,
    tensors: Vec<Vec<Derivation>>,
}

impl Context {
    fn new(ctx: SymplecticContext, max_degree: usize, exec: Execution) -> Result<Self> {
        let degrees: Vec<usize> = (0..=max_degree).collect();
        let bases = exec.map(&degrees, |&d| der_sp_basis(ctx, d)).into_iter().collect::<Result<Vec<_>>>()?;
        let tensors = bases
            .iter()
            .map(|b| b.elements.iter().map(SpDerivation::to_derivation).collect())
            .collect();
        Ok(Self { ctx, bases, tensors })
    }
}

struct Inner {
    layout: Layout,
    pairs: usize,
    matrix: SparseMatrix,
    kernel: Nullspace,
    trace: SparseVector,
}

impl Inner {
    fn contains_trace(&self) -> bool {
        self.matrix.mul_vec(&self.trace).expect("sized to the layout").is_zero()
    }

    fn restricted(&self) -> Option<(Vec<SparseVector>, SparseVector)> {
        (self.layout.offsets.len() > 3).then(|| {
            let vs = self.kernel.basis.iter().map(|v| self.layout.restrict_from(v, 2)).collect();
            (vs, self.layout.restrict_from(&self.trace, 2))
        })
    }

    fn row(&self, max_degree: usize) -> Result<CutoffRow> {
        let (dimension_degree_ge2, contains_trace_degree_ge2) = match self.restricted() {
            Some((vs, t)) => (Some(span_dimension(&vs)?), Some(express_in_span(&vs, &t)?.is_some())),
            None => (None, None),
        };
        Ok(CutoffRow {
            max_degree,
            unknowns: self.layout.len,
            rows: self.matrix.nrows(),
            dimension: self.kernel.dimension(),
            dimension_degree_ge2,
            contains_trace: self.contains_trace(),
            contains_trace_degree_ge2,
        })
    }
}

fn solve_at(c: &Context, max_degree: usize, exec: Execution) -> Result<Inner> {
    let dims: Vec<usize> = c.bases[..=max_degree].iter().map(DerSpBasis::dimension).collect();
    let layout = Layout::new(c.ctx, &dims);

    // images[d][b][q][N] = D_{d,b} · |N| for |N| of length q.
    let elems: Vec<(usize, usize)> = (0..=max_degree).flat_map(|d| (0..dims[d]).map(move |b| (d, b))).collect();
    let images: Vec<Vec<CyclicPoly>> = exec.map(&elems, |&(d, b)| {
        (0..=max_degree - d)
            .flat_map(|q| layout.necks[q].iter())
            .map(|nk| c.tensors[d][b].act_on_cyclic(&CyclicPoly::basis(nk.clone())))
            .collect()
    });
    let elem_pos: HashMap<(usize, usize), usize> = elems.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let image = |d: usize, b: usize, q: usize, nk: usize| -> &CyclicPoly {
        let before: usize = (0..q).map(|r| layout.necks[r].len()).sum();
        &images[elem_pos[&(d, b)]][before + nk]
    };

    let mut pairs = Vec::new();
    for p in 0..=max_degree {
        for q in p..=max_degree.saturating_sub(p) {
            for i in 0..dims[p] {
                for j in 0..dims[q] {
                    if p < q || i < j {
                        pairs.push((p, i, q, j));
                    }
                }
            }
        }
    }

    let rows: Vec<SparseVector> = exec
        .map(&pairs, |&(p, i, q, j)| -> Result<Vec<SparseVector>> {
            let mut acc: LinComb<(Necklace, usize)> = LinComb::zero();
            for nk in 0..layout.necks[q].len() {
                let v = layout.var(q, j, nk);
                for (m, a) in image(p, i, q, nk) {
                    acc.add_term((m.clone(), v), a.clone());
                }
            }
            for nk in 0..layout.necks[p].len() {
                let v = layout.var(p, i, nk);
                for (m, a) in image(q, j, p, nk) {
                    acc.add_term((m.clone(), v), -a.clone());
                }
            }
            let br = c.tensors[p][i].bracket(&c.tensors[q][j])?;
            let coords = c.bases[p + q].coordinates_of_tensor(&br)?;
            for (b, lambda) in coords.iter().enumerate().filter(|(_, l)| !l.is_zero()) {
                for (nk, m) in layout.necks[p + q].iter().enumerate() {
                    acc.add_term((m.clone(), layout.var(p + q, b, nk)), -lambda.clone());
                }
            }
            let mut grouped: BTreeMap<Necklace, Vec<(usize, Rational)>> = BTreeMap::new();
            for ((m, v), a) in acc.into_terms() {
                grouped.entry(m).or_default().push((v, a));
            }
            grouped.into_values().map(|e| SparseVector::from_entries(layout.len, e)).collect()
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let matrix = SparseMatrix::from_rows(layout.len, &rows)?;
    let kernel = nullspace(&matrix);

    let mut trace = Vec::new();
    for d in 0..=max_degree {
        for (b, e) in c.bases[d].elements.iter().enumerate() {
            for (m, a) in &es_trace(e) {
                trace.push((layout.var(d, b, layout.neck_index[d][m]), a.clone()));
            }
        }
    }
    let trace = SparseVector::from_entries(layout.len, trace)?;
    Ok(Inner {
        layout,
        pairs: pairs.len(),
        matrix,
        kernel,
        trace,
    })
}

/// Cochain given by a kernel vector, evaluated on a combination of basis
/// elements of one degree.
fn evaluate(layout: &Layout, v: &SparseVector, d: usize, coords: &[Rational]) -> CyclicPoly {
    let mut out = CyclicPoly::zero();
    for (b, lambda) in coords.iter().enumerate().filter(|(_, l)| !l.is_zero()) {
        for (nk, m) in layout.necks[d].iter().enumerate() {
            let x = v.get(layout.var(d, b, nk));
            if !x.is_zero() {
                out.add_term(m.clone(), lambda * x);
            }
        }
    }
    out
}

fn combination(c: &Context, d: usize, coords: &[Rational]) -> SpDerivation {
    let mut out = SpDerivation::zero(c.ctx);
    for (e, a) in c.bases[d].elements.iter().zip(coords) {
        out = out.add(&e.scaled(a));
    }
    out
}

fn fresh_check(c: &Context, inner: &Inner, max_degree: usize, opts: &EsOptions) -> Result<Check> {
    let mut rng = seeded(opts.seed ^ 0x5eed);
    let mut samples = Vec::new();
    for _ in 0..opts.fresh_pairs {
        let p = rng.gen_range(0..=max_degree);
        let q = rng.gen_range(0..=max_degree - p);
        let mut draw = |d: usize| -> Vec<Rational> {
            (0..c.bases[d].dimension())
                .map(|_| if rng.gen_bool(0.3) { int(rng.gen_range(-3..=3)) } else { int(0) })
                .collect()
        };
        samples.push((p, draw(p), q, draw(q)));
    }
    let failures: Vec<Option<String>> = opts.exec.map(&samples, |(p, a, q, b)| {
        let d1 = combination(c, *p, a);
        let d2 = combination(c, *q, b);
        let br = match d1.to_derivation().bracket(&d2.to_derivation()) {
            Ok(br) => br,
            Err(e) => return Some(e.to_string()),
        };
        let coords = match c.bases[p + q].coordinates_of_tensor(&br) {
            Ok(x) => x,
            Err(e) => return Some(e.to_string()),
        };
        inner.kernel.basis.iter().enumerate().find_map(|(k, v)| {
            let mut r = d1.act_on_cyclic(&evaluate(&inner.layout, v, *q, b));
            r.sub_assign_ref(&d2.act_on_cyclic(&evaluate(&inner.layout, v, *p, a)));
            r.sub_assign_ref(&evaluate(&inner.layout, v, p + q, &coords));
            (!r.is_zero()).then(|| format!("kernel vector {k} fails on degrees ({p}, {q})"))
        })
    });
    match failures.into_iter().flatten().next() {
        Some(msg) => Err(Error::Verification(msg)),
        None => Ok(Check::new(
            "fresh_pairs",
            true,
            Some(format!("{} random pairs", opts.fresh_pairs)),
        )),
    }
}

/// Draws the `φ(∧³H)` pairs used by [`trace_cocycle_check`]: the second entry
/// alternates between a `φ` combination and a bracket of two of them.
pub fn phi_sample_pairs(ctx: SymplecticContext, count: usize, seed: u64) -> Result<Vec<(SpDerivation, SpDerivation)>> {
    let phis = wedge3_basis(ctx).iter().map(phi_inject).collect::<Result<Vec<_>>>()?;
    let mut rng = seeded(seed);
    let draw = |rng: &mut crate::random::SeededRng| {
        let mut out = SpDerivation::zero(ctx);
        while out.is_zero() {
            for p in &phis {
                if rng.gen_bool(0.5) {
                    out = out.add(&p.scaled(&int(rng.gen_range(-3..=3))));
                }
            }
        }
        out
    };
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let d1 = draw(&mut rng);
        let d2 = if k % 2 == 0 {
            draw(&mut rng)
        } else {
            let a = draw(&mut rng);
            a.bracket(&draw(&mut rng))?
        };
        out.push((d1, d2));
    }
    Ok(out)
}

/// Checks `d1·Tr(d2) − d2·Tr(d1) − Tr([d1, d2]) = 0` on seeded pairs from
/// `φ(∧³H)`; returns the number of pairs and the failing ones.
pub fn trace_cocycle_check(ctx: SymplecticContext, count: usize, seed: u64, exec: Execution) -> Result<(usize, Vec<usize>)> {
    let pairs = phi_sample_pairs(ctx, count, seed)?;
    let results = exec.map(&pairs, |(d1, d2)| super::sp_coboundary(&es_trace, d1, d2).map(|r| r.is_zero()));
    let mut failing = Vec::new();
    for (k, r) in results.into_iter().enumerate() {
        if !r? {
            failing.push(k);
        }
    }
    Ok((pairs.len(), failing))
}

pub fn es_uniqueness_solve(ctx: SymplecticContext, max_degree: usize, opts: &EsOptions) -> Result<EsUniquenessReport> {
    if ctx.n() < 2 {
        return Err(Error::UnsupportedRange("the uniqueness solve needs n >= 2".into()));
    }
    if max_degree == 0 {
        return Err(Error::UnsupportedRange("max_degree must be at least 1".into()));
    }
    let c = Context::new(ctx, max_degree, opts.exec)?;
    let inner = solve_at(&c, max_degree, opts.exec)?;
    let top = inner.row(max_degree)?;
    let mut checks = Vec::new();

    let der_sp_dimensions: Vec<usize> = c.bases.iter().map(DerSpBasis::dimension).collect();
    let expected: Vec<usize> = c.bases.iter().map(DerSpBasis::expected_dimension).collect();
    checks.push(Check::new(
        "der_sp_dimensions",
        der_sp_dimensions == expected,
        Some(format!("computed {der_sp_dimensions:?}, Witt count {expected:?}")),
    ));

    let trace_coordinates = top.contains_trace.then(|| inner.kernel.coordinates(&inner.trace));
    let nonzero = trace_coordinates.as_ref().is_some_and(|x| x.iter().any(|a| !a.is_zero()));
    checks.push(Check::new(
        "trace_in_solution_space",
        top.contains_trace || top.contains_trace_degree_ge2 == Some(true),
        Some(format!(
            "full vector: {}, degrees >= 2: {}",
            top.contains_trace,
            top.contains_trace_degree_ge2.map_or("n/a".to_string(), |b| b.to_string())
        )),
    ));
    checks.push(Check::new(
        "trace_nonzero_coordinates",
        if top.contains_trace { nonzero } else { !inner.layout.restrict_from(&inner.trace, 2.min(max_degree)).is_zero() },
        None,
    ));

    let excess = top.dimension > 1;
    let mut cutoff_table = Vec::new();
    if excess || opts.cutoff_table {
        for m in 1..max_degree {
            cutoff_table.push(solve_at(&c, m, opts.exec)?.row(m)?);
        }
        cutoff_table.push(top.clone());
    }
    checks.push(Check::new(
        "dimension",
        top.dimension == 1 || !cutoff_table.is_empty(),
        Some(if excess {
            format!("dimension {} exceeds 1 at cutoff {max_degree}; see cutoff table", top.dimension)
        } else {
            format!("dimension {}", top.dimension)
        }),
    ));

    checks.push(fresh_check(&c, &inner, max_degree, opts)?);
    let (tested, failing) = trace_cocycle_check(ctx, opts.trace_pairs, opts.seed, opts.exec)?;
    checks.push(Check::new(
        "trace_cocycle_on_phi_pairs",
        failing.is_empty(),
        Some(format!("{} of {tested} pairs pass", tested - failing.len())),
    ));

    let degree_one_part = SparseVector::from_entries(
        inner.layout.len,
        inner
            .trace
            .entries()
            .iter()
            .filter(|(i, _)| (inner.layout.offsets[1]..inner.layout.offsets[2]).contains(i))
            .cloned(),
    )?;
    let trace_degree_one_part_is_cocycle = inner.matrix.mul_vec(&degree_one_part)?.is_zero();
    let trace_degree_one = c
        .bases
        .get(1)
        .map(|b| b.elements.iter().map(|e| format_cyclic(&ctx, &es_trace(e))).collect())
        .unwrap_or_default();

    Ok(EsUniquenessReport {
        n: ctx.n(),
        max_degree,
        der_sp_dimensions,
        unknowns: inner.layout.len,
        pairs: inner.pairs,
        rows: inner.matrix.nrows(),
        rank: inner.layout.len - inner.kernel.dimension(),
        dimension: top.dimension,
        dimension_degree_ge2: top.dimension_degree_ge2,
        contains_trace: top.contains_trace,
        contains_trace_degree_ge2: top.contains_trace_degree_ge2,
        trace_coordinates: trace_coordinates.map(|x| x.iter().map(format_rational).collect()),
        trace_degree_one,
        trace_degree_one_part_is_cocycle,
        excess,
        cutoff_table,
        checks,
    })
}

pub(crate) fn format_cyclic(ctx: &SymplecticContext, p: &CyclicPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    p.iter()
        .map(|(m, c)| {
            let word: Vec<String> = m.representative().letters().iter().map(|&l| ctx.label(l)).collect();
            format!("{}*|{}|", format_rational(c), word.join(""))
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomSpReport {
    pub n: usize,
    pub dimension: usize,
    pub phi_bar_is_intertwiner: bool,
    pub phi_bar_rank: usize,
    pub phi_bar_kernel_dimension: usize,
}

/// Solves for linear maps `M: ∧³H → H` with `X∘M = M∘X` for every `X` in
/// the computed basis of `sp(2n) = Der_Sp(0)`.
pub fn hom_sp_wedge3_to_h(ctx: SymplecticContext) -> Result<HomSpReport> {
    let sp = der_sp_basis(ctx, 0)?;
    let wedges = wedge3_basis(ctx);
    let gens: Vec<Letter> = ctx.generators().collect();
    let (m, w) = (gens.len(), wedges.len());
    let var = |h: usize, k: usize| h * w + k;
    let wedge_index: HashMap<[Letter; 3], usize> =
        wedges.iter().enumerate().map(|(k, x)| (*x.terms().first().expect("basis").0, k)).collect();
    let mut rows = Vec::new();
    for x in sp.elements() {
        let act = |l: Letter| -> HElement {
            x.value_on(l).terms().iter().map(|(v, c)| (v.letters()[0], c.clone())).collect()
        };
        for (k, wk) in wedges.iter().enumerate() {
            let xw = wk.act(&act);
            for h in 0..m {
                let mut acc: LinComb<usize> = LinComb::zero();
                for (t, c) in xw.terms() {
                    acc.add_term(var(h, wedge_index[t]), c.clone());
                }
                for (hp, &g) in gens.iter().enumerate() {
                    let a = act(g).coeff(&gens[h]);
                    if !a.is_zero() {
                        acc.add_term(var(hp, k), -a);
                    }
                }
                if !acc.is_zero() {
                    rows.push(SparseVector::from_entries(m * w, acc.into_terms())?);
                }
            }
        }
    }
    let matrix = SparseMatrix::from_rows(m * w, &rows)?;
    let dimension = nullspace(&matrix).dimension();
    let mut bar = Vec::new();
    let mut images = Vec::new();
    for (k, wk) in wedges.iter().enumerate() {
        let img = phi_bar_3(wk);
        let v = SparseVector::from_entries(m, img.iter().map(|(l, c)| (*l as usize - 1, c.clone())))?;
        for (l, c) in &img {
            bar.push((var(*l as usize - 1, k), c.clone()));
        }
        images.push(v);
    }
    let phi_bar = SparseVector::from_entries(m * w, bar)?;
    let phi_bar_rank = span_dimension(&images)?;
    Ok(HomSpReport {
        n: ctx.n(),
        dimension,
        phi_bar_is_intertwiner: matrix.mul_vec(&phi_bar)?.is_zero(),
        phi_bar_rank,
        phi_bar_kernel_dimension: w - phi_bar_rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rank;

    fn ctx(n: usize) -> SymplecticContext {
        SymplecticContext::new(n).unwrap()
    }

    #[test]
    fn der_sp_dimensions_match_witt_count() {
        let c = ctx(2);
        let dims: Vec<usize> = (0..=3).map(|d| der_sp_basis(c, d).unwrap().dimension()).collect();
        assert_eq!(dims, vec![10, 4, 20, 36]);
        let c3 = ctx(3);
        let b = der_sp_basis(c3, 1).unwrap();
        assert_eq!(b.dimension(), b.expected_dimension());
        assert_eq!(b.dimension(), 20);
    }

    #[test]
    fn basis_elements_are_symplectic() {
        let c = ctx(2);
        for d in 0..=2 {
            let b = der_sp_basis(c, d).unwrap();
            for e in b.elements() {
                assert!(e.is_symplectic());
                assert_eq!(e.homogeneous_degree(), Some(d));
            }
        }
    }

    #[test]
    fn phi_lands_in_der_sp_and_is_injective() {
        for n in [2, 3] {
            let c = ctx(n);
            let b = der_sp_basis(c, 1).unwrap();
            let coords: Vec<Vec<Rational>> = wedge3_basis(c)
                .iter()
                .map(|w| b.coordinates(&phi_inject(w).unwrap()).unwrap())
                .collect();
            let rows: Vec<SparseVector> = coords.iter().map(|x| SparseVector::from_dense(x)).collect();
            let m = SparseMatrix::from_rows(b.dimension(), &rows).unwrap();
            assert_eq!(rank(&m), wedge3_basis(c).len());
        }
    }

    #[test]
    fn coordinates_reject_non_symplectic() {
        let c = ctx(2);
        let b = der_sp_basis(c, 1).unwrap();
        let bad = SpDerivation::from_terms_unchecked(c, LinComb::basis((1, Word::from_slice(&[1, 2]))));
        assert_eq!(b.coordinates(&bad), Err(Error::NotSymplectic));
    }

    #[test]
    fn brackets_stay_symplectic() {
        let c = ctx(2);
        let b1 = der_sp_basis(c, 1).unwrap();
        let b2 = der_sp_basis(c, 2).unwrap();
        let e = &b1.elements()[0];
        let f = &b2.elements()[3];
        let br = e.bracket(f).unwrap();
        assert!(br.is_symplectic());
        assert_eq!(br.homogeneous_degree().unwrap_or(3), 3);
    }

    #[test]
    fn trace_cocycle_on_phi_pairs() {
        let (tested, failing) = trace_cocycle_check(ctx(2), 10, 1, Execution::Sequential).unwrap();
        assert_eq!(tested, 10);
        assert!(failing.is_empty(), "failing pairs {failing:?}");
    }

    #[test]
    fn intertwiners_n2() {
        let r = hom_sp_wedge3_to_h(ctx(2)).unwrap();
        assert_eq!(r.dimension, 1);
        assert!(r.phi_bar_is_intertwiner);
        assert_eq!(r.phi_bar_rank, 4);
        assert_eq!(r.phi_bar_kernel_dimension, 0);
    }

    #[test]
    fn phi_bar_kernel_n3() {
        let r = hom_sp_wedge3_to_h(ctx(3)).unwrap();
        assert_eq!(r.phi_bar_rank, 6);
        assert_eq!(r.phi_bar_kernel_dimension, 14);
        assert!(r.phi_bar_is_intertwiner);
    }

    #[test]
    fn small_uniqueness_solve() {
        let opts = EsOptions {
            exec: Execution::Sequential,
            cutoff_table: true,
            ..EsOptions::default()
        };
        let r = es_uniqueness_solve(ctx(2), 2, &opts).unwrap();
        assert_eq!(r.der_sp_dimensions, vec![10, 4, 20]);
        assert_eq!(r.cutoff_table.len(), 2);
        assert!(r.contains_trace || r.contains_trace_degree_ge2 == Some(true));
        assert!(r.trace_degree_one_part_is_cocycle);
    }
}
