//! Exact sparse linear algebra over ℚ.
//!
//! Elimination works on primitive integer rows: every rational row is scaled
//! to coprime integers, rows are combined fraction-free
//! (`r ← (b/g)·r − (a/g)·p`) and the content is divided out after each step.
//! Before elimination, rows with a single live entry are peeled off
//! (they force their variable to zero), duplicates are dropped and the
//! remaining columns are ordered by ascending occupancy so that pivots land on
//! the sparsest columns first.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Renders a rational as `p` or `p/q`.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("invalid rational {s:?}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse(d)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(parse(n)?, d))
        }
        None => Ok(Rational::from_integer(parse(s)?)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SparseVector {
    len: usize,
    entries: Vec<(usize, Rational)>,
}

impl SparseVector {
    pub fn zero(len: usize) -> Self {
        Self {
            len,
            entries: Vec::new(),
        }
    }

    /// Builds a vector from `(index, value)` pairs; duplicates are summed and
    /// zeros dropped.
    pub fn from_entries<I: IntoIterator<Item = (usize, Rational)>>(len: usize, entries: I) -> Result<Self> {
        let mut map: BTreeMap<usize, Rational> = BTreeMap::new();
        for (i, v) in entries {
            if i >= len {
                return Err(Error::IndexOutOfRange { index: i, n: len });
            }
            *map.entry(i).or_insert_with(Rational::zero) += v;
        }
        Ok(Self {
            len,
            entries: map.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        })
    }

    pub fn from_dense(values: &[Rational]) -> Self {
        Self {
            len: values.len(),
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, Rational)] {
        &self.entries
    }

    pub fn get(&self, index: usize) -> Rational {
        match self.entries.binary_search_by_key(&index, |(i, _)| *i) {
            Ok(k) => self.entries[k].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn to_dense(&self) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.len];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero(self.len);
        }
        Self {
            len: self.len,
            entries: self.entries.iter().map(|(i, v)| (*i, v * factor)).collect(),
        }
    }

    /// `self + factor · other`.
    pub fn add_scaled(&self, other: &Self, factor: &Rational) -> Result<Self> {
        if self.len != other.len {
            return Err(Error::DimensionMismatch {
                expected: self.len,
                found: other.len,
            });
        }
        Self::from_entries(
            self.len,
            self.entries
                .iter()
                .cloned()
                .chain(other.entries.iter().map(|(i, v)| (*i, v * factor))),
        )
    }

    pub fn first_nonzero(&self) -> Option<&(usize, Rational)> {
        self.entries.first()
    }
}

/// Row-major sparse matrix over ℚ with no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseMatrix {
    cols: usize,
    rows: Vec<Vec<(usize, Rational)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            cols: n,
            rows: (0..n).map(|i| vec![(i, Rational::one())]).collect(),
        }
    }

    pub fn from_triplets<I: IntoIterator<Item = (usize, usize, Rational)>>(
        rows: usize,
        cols: usize,
        triplets: I,
    ) -> Result<Self> {
        let mut grouped: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); rows];
        for (r, c, v) in triplets {
            if r >= rows {
                return Err(Error::IndexOutOfRange { index: r, n: rows });
            }
            if c >= cols {
                return Err(Error::IndexOutOfRange { index: c, n: cols });
            }
            grouped[r].push((c, v));
        }
        let mut m = Self::zeros(0, cols);
        for entries in grouped {
            m.push_row(&SparseVector::from_entries(cols, entries)?)?;
        }
        Ok(m)
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(0, cols);
        for r in rows {
            let v: Vec<Rational> = r.iter().map(|&x| int(x)).collect();
            m.push_row(&SparseVector::from_dense(&v)).expect("ragged dense matrix");
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[SparseVector]) -> Result<Self> {
        let mut m = Self::zeros(0, cols);
        for r in rows {
            m.push_row(r)?;
        }
        Ok(m)
    }

    pub fn push_row(&mut self, row: &SparseVector) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: row.len(),
            });
        }
        self.rows.push(row.entries.clone());
        Ok(())
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn row(&self, r: usize) -> SparseVector {
        SparseVector {
            len: self.cols,
            entries: self.rows[r].clone(),
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.row(r).get(c)
    }

    pub fn mul_vec(&self, v: &SparseVector) -> Result<SparseVector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let dense = v.to_dense();
        let values: Vec<Rational> = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .filter(|(c, _)| !dense[*c].is_zero())
                    .fold(Rational::zero(), |acc, (c, x)| acc + x * &dense[*c])
            })
            .collect();
        Ok(SparseVector::from_dense(&values))
    }
}

// ---------------------------------------------------------------------------
// integer row kernel

type IntRow = Vec<(u32, BigInt)>;

/// Scales a rational row to coprime integers with a positive leading entry.
fn primitive_from_rational(entries: &[(usize, Rational)]) -> IntRow {
    if entries.is_empty() {
        return Vec::new();
    }
    let lcm = entries
        .iter()
        .fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
    let mut row: IntRow = entries
        .iter()
        .map(|(c, v)| (*c as u32, v.numer() * (&lcm / v.denom())))
        .collect();
    normalize(&mut row);
    row
}

fn normalize(row: &mut IntRow) {
    if row.is_empty() {
        return;
    }
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    let negate = row[0].1.is_negative();
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
    if negate {
        for (_, v) in row.iter_mut() {
            *v = -&*v;
        }
    }
}

/// Eliminates the leading entry of `row` using `pivot` (same leading column).
fn reduce(row: &IntRow, pivot: &IntRow) -> IntRow {
    let a = &row[0].1;
    let b = &pivot[0].1;
    let g = a.gcd(b);
    let row_mul = b / &g;
    let piv_mul = a / &g;
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (1, 1);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map_or(u32::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(u32::MAX, |e| e.0);
        if ci < cj {
            out.push((ci, &row[i].1 * &row_mul));
            i += 1;
        } else if cj < ci {
            out.push((cj, -(&pivot[j].1 * &piv_mul)));
            j += 1;
        } else {
            let v = &row[i].1 * &row_mul - &pivot[j].1 * &piv_mul;
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    normalize(&mut out);
    out
}

#[derive(Default)]
struct Echelon {
    pivots: HashMap<u32, IntRow>,
}

impl Echelon {
    /// Reduces `row` against the stored pivots. Returns the residue.
    fn residue(&self, mut row: IntRow) -> IntRow {
        while let Some(&(lead, _)) = row.first() {
            match self.pivots.get(&lead) {
                Some(p) => row = reduce(&row, p),
                None => break,
            }
        }
        row
    }

    fn insert(&mut self, row: IntRow) -> bool {
        let row = self.residue(row);
        match row.first() {
            Some(&(lead, _)) => {
                self.pivots.insert(lead, row);
                true
            }
            None => false,
        }
    }
}

/// Result of a batch elimination, expressed in permuted column positions.
struct Eliminated {
    cols: usize,
    /// Columns forced to zero by singleton rows.
    zeroed: Vec<bool>,
    /// position -> original column
    order: Vec<usize>,
    pivots: BTreeMap<u32, IntRow>,
}

impl Eliminated {
    fn rank(&self) -> usize {
        self.zeroed.iter().filter(|z| **z).count() + self.pivots.len()
    }

    fn free_columns(&self) -> Vec<usize> {
        let mut free: Vec<usize> = (0..self.cols)
            .filter(|&p| !self.pivots.contains_key(&(p as u32)))
            .map(|p| self.order[p])
            .filter(|&c| !self.zeroed[c])
            .collect();
        free.sort_unstable();
        free
    }

    /// Kernel vector with `free_col = 1` and every other free column zero.
    fn kernel_vector(&self, free_col: usize, position: &[u32]) -> SparseVector {
        let mut x = vec![Rational::zero(); self.cols];
        x[position[free_col] as usize] = Rational::one();
        for (&p, row) in self.pivots.iter().rev() {
            let mut s = Rational::zero();
            for (q, v) in &row[1..] {
                let xq = &x[*q as usize];
                if !xq.is_zero() {
                    s += xq * Rational::from_integer(v.clone());
                }
            }
            if !s.is_zero() {
                x[p as usize] = -s / Rational::from_integer(row[0].1.clone());
            }
        }
        let entries = x
            .into_iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(p, v)| (self.order[p], v));
        SparseVector::from_entries(self.cols, entries).expect("positions in range")
    }
}

fn eliminate(m: &SparseMatrix) -> Eliminated {
    let cols = m.cols;

    let mut seen: HashSet<IntRow> = HashSet::new();
    let mut rows: Vec<IntRow> = Vec::new();
    for r in &m.rows {
        let row = primitive_from_rational(r);
        if !row.is_empty() && seen.insert(row.clone()) {
            rows.push(row);
        }
    }
    drop(seen);

    // singleton peeling
    let mut zeroed = vec![false; cols];
    let mut live: Vec<usize> = rows.iter().map(Vec::len).collect();
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); cols];
    for (i, r) in rows.iter().enumerate() {
        for (c, _) in r {
            col_rows[*c as usize].push(i);
        }
    }
    let mut queue: Vec<usize> = (0..rows.len()).filter(|&i| live[i] == 1).collect();
    while let Some(i) = queue.pop() {
        if live[i] != 1 {
            continue;
        }
        let Some(&(c, _)) = rows[i].iter().find(|(c, _)| !zeroed[*c as usize]) else {
            continue;
        };
        zeroed[c as usize] = true;
        for &j in &col_rows[c as usize] {
            live[j] -= 1;
            if live[j] == 1 {
                queue.push(j);
            }
        }
    }
    drop(col_rows);

    let mut remaining: Vec<Vec<(usize, BigInt)>> = rows
        .into_iter()
        .zip(live)
        .filter(|(_, l)| *l > 0)
        .map(|(r, _)| {
            r.into_iter()
                .filter(|(c, _)| !zeroed[*c as usize])
                .map(|(c, v)| (c as usize, v))
                .collect()
        })
        .collect();

    // sparsest columns first
    let mut count = vec![0usize; cols];
    for r in &remaining {
        for (c, _) in r {
            count[*c] += 1;
        }
    }
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by_key(|&c| (count[c], c));
    let mut position = vec![0u32; cols];
    for (p, &c) in order.iter().enumerate() {
        position[c] = p as u32;
    }

    let mut seen: HashSet<IntRow> = HashSet::new();
    let mut permuted: Vec<IntRow> = Vec::with_capacity(remaining.len());
    for r in remaining.drain(..) {
        let mut row: IntRow = r.into_iter().map(|(c, v)| (position[c], v)).collect();
        row.sort_unstable_by_key(|e| e.0);
        normalize(&mut row);
        if seen.insert(row.clone()) {
            permuted.push(row);
        }
    }
    drop(seen);
    permuted.sort_by(|a, b| (a[0].0, a.len()).cmp(&(b[0].0, b.len())));

    let mut ech = Echelon::default();
    for row in permuted {
        ech.insert(row);
    }

    Eliminated {
        cols,
        zeroed,
        order,
        pivots: ech.pivots.into_iter().collect(),
    }
}

fn positions(e: &Eliminated) -> Vec<u32> {
    let mut position = vec![0u32; e.cols];
    for (p, &c) in e.order.iter().enumerate() {
        position[c] = p as u32;
    }
    position
}

/// Rank over ℚ.
pub fn rank(m: &SparseMatrix) -> usize {
    eliminate(m).rank()
}

/// A basis of the right null space in "free-column" form: `basis[i]` has a
/// `1` at `free_columns[i]` and `0` at every other free column, so the
/// coordinates of any kernel element `v` are `v[free_columns[i]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nullspace {
    pub free_columns: Vec<usize>,
    pub basis: Vec<SparseVector>,
}

impl Nullspace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a kernel element with respect to `basis`.
    pub fn coordinates(&self, v: &SparseVector) -> Vec<Rational> {
        self.free_columns.iter().map(|&c| v.get(c)).collect()
    }
}

pub fn nullspace(m: &SparseMatrix) -> Nullspace {
    let e = eliminate(m);
    let position = positions(&e);
    let free_columns = e.free_columns();
    let basis = free_columns
        .iter()
        .map(|&f| e.kernel_vector(f, &position))
        .collect();
    Nullspace {
        free_columns,
        basis,
    }
}

/// Basis of the right null space, each vector scaled so that its first
/// nonzero entry is `1`.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<SparseVector> {
    nullspace(m)
        .basis
        .into_iter()
        .map(|v| {
            let lead = v.first_nonzero().expect("kernel vectors are nonzero").1.clone();
            v.scaled(&lead.recip())
        })
        .collect()
}

/// Rank of the matrix whose rows are `vectors`.
pub fn span_dimension(vectors: &[SparseVector]) -> Result<usize> {
    let Some(first) = vectors.first() else {
        return Ok(0);
    };
    let m = SparseMatrix::from_rows(first.len(), vectors)?;
    Ok(rank(&m))
}

/// Solves `Σ λ_i basis_i = target`. Returns `None` when `target` is outside
/// the span. When the basis is dependent one solution is returned.
pub fn express_in_span(basis: &[SparseVector], target: &SparseVector) -> Result<Option<Vec<Rational>>> {
    let len = target.len();
    let k = basis.len();
    let mut triplets = Vec::new();
    for (j, v) in basis.iter().enumerate() {
        if v.len() != len {
            return Err(Error::DimensionMismatch {
                expected: len,
                found: v.len(),
            });
        }
        triplets.extend(v.entries().iter().map(|(i, x)| (*i, j, x.clone())));
    }
    triplets.extend(target.entries().iter().map(|(i, x)| (*i, k, -x.clone())));
    let m = SparseMatrix::from_triplets(len, k + 1, triplets)?;
    let ns = nullspace(&m);
    let Some(v) = ns.basis.iter().find(|v| !v.get(k).is_zero()) else {
        return Ok(None);
    };
    let scale = v.get(k).recip();
    Ok(Some((0..k).map(|j| v.get(j) * &scale).collect()))
}

/// Incremental span tracker in natural column order.
#[derive(Default)]
pub struct SpanTracker {
    len: usize,
    echelon: Echelon,
}

impl SpanTracker {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            echelon: Echelon::default(),
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon.pivots.len()
    }

    fn check(&self, v: &SparseVector) -> Result<()> {
        if v.len() != self.len {
            return Err(Error::DimensionMismatch {
                expected: self.len,
                found: v.len(),
            });
        }
        Ok(())
    }

    /// Adds `v`; returns whether it enlarged the span.
    pub fn insert(&mut self, v: &SparseVector) -> Result<bool> {
        self.check(v)?;
        Ok(self.echelon.insert(primitive_from_rational(v.entries())))
    }

    pub fn contains(&self, v: &SparseVector) -> Result<bool> {
        self.check(v)?;
        Ok(self
            .echelon
            .residue(primitive_from_rational(v.entries()))
            .is_empty())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&SparseMatrix::identity(3)), 3);
        assert_eq!(rank(&SparseMatrix::zeros(4, 7)), 0);
        assert_eq!(rank(&SparseMatrix::from_dense(&[vec![1, 2, 3], vec![2, 4, 6]])), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&SparseMatrix::identity(3)).is_empty());
        let k = kernel_basis(&SparseMatrix::zeros(2, 2));
        assert_eq!(k.len(), 2);
        let k = kernel_basis(&SparseMatrix::from_dense(&[vec![1, -1]]));
        assert_eq!(k, vec![SparseVector::from_dense(&[int(1), int(1)])]);
    }

    #[test]
    fn kernel_vectors_start_with_one() {
        let m = SparseMatrix::from_dense(&[vec![0, 2, 4, 1], vec![0, 1, 2, 3]]);
        for v in kernel_basis(&m) {
            assert_eq!(v.first_nonzero().unwrap().1, int(1));
            assert!(m.mul_vec(&v).unwrap().is_zero());
        }
    }

    #[test]
    fn span_dimension_examples() {
        let v = |a: i64, b: i64| SparseVector::from_dense(&[int(a), int(b)]);
        assert_eq!(span_dimension(&[v(1, 0), v(0, 1)]).unwrap(), 2);
        assert_eq!(span_dimension(&[v(1, 1), v(2, 2)]).unwrap(), 1);
        assert_eq!(span_dimension(&[]).unwrap(), 0);
        let odd = SparseVector::from_dense(&[int(1)]);
        assert!(matches!(
            span_dimension(&[v(1, 1), odd]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn express_in_span_solves() {
        let v = |a: i64, b: i64, c: i64| SparseVector::from_dense(&[int(a), int(b), int(c)]);
        let coeffs = express_in_span(&[v(1, 0, 1), v(0, 1, 1)], &v(2, 3, 5)).unwrap().unwrap();
        assert_eq!(coeffs, vec![int(2), int(3)]);
        assert!(express_in_span(&[v(1, 0, 1)], &v(0, 1, 0)).unwrap().is_none());
    }

    #[test]
    fn singleton_rows_force_zero() {
        // x0 = 0 forces x1 = 0 through the second row; x2 free
        let m = SparseMatrix::from_dense(&[vec![3, 0, 0], vec![1, 2, 0]]);
        let k = kernel_basis(&m);
        assert_eq!(k, vec![SparseVector::from_dense(&[int(0), int(0), int(1)])]);
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn rational_entries() {
        let m = SparseMatrix::from_triplets(1, 2, [(0, 0, rat(1, 2)), (0, 1, rat(-1, 3))]).unwrap();
        let k = kernel_basis(&m);
        assert_eq!(k, vec![SparseVector::from_dense(&[int(1), rat(3, 2)])]);
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(format_rational(&rat(-6, 4)), "-3/2");
        assert_eq!(parse_rational("-3/2").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..6, 1usize..7).prop_flat_map(|(r, c)| {
            proptest::collection::vec(
                proptest::collection::vec(prop_oneof![4 => Just(0i64), 3 => -3i64..=3], c),
                r,
            )
        })
    }

    fn dense_rank_oracle(rows: &[Vec<i64>]) -> usize {
        // plain Gauss-Jordan over ℚ on a dense copy
        let mut a: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        let (nr, nc) = (a.len(), a[0].len());
        let mut r = 0;
        for c in 0..nc {
            let Some(p) = (r..nr).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(r, p);
            for i in 0..nr {
                if i != r && !a[i][c].is_zero() {
                    let f = &a[i][c] / &a[r][c];
                    for j in 0..nc {
                        let t = &a[r][j] * &f;
                        a[i][j] -= t;
                    }
                }
            }
            r += 1;
        }
        r
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in small_matrix()) {
            let m = SparseMatrix::from_dense(&rows);
            let k = kernel_basis(&m);
            prop_assert_eq!(rank(&m) + k.len(), m.ncols());
            prop_assert_eq!(rank(&m), dense_rank_oracle(&rows));
            for v in &k {
                prop_assert!(m.mul_vec(v).unwrap().is_zero());
            }
            prop_assert_eq!(span_dimension(&k).unwrap(), k.len());
        }

        #[test]
        fn rank_invariant_under_row_operations(
            rows in small_matrix(),
            seed in any::<u64>(),
        ) {
            let m = SparseMatrix::from_dense(&rows);
            let mut perm: Vec<usize> = (0..rows.len()).collect();
            let mut s = seed;
            for i in (1..perm.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                perm.swap(i, (s >> 33) as usize % (i + 1));
            }
            let scaled: Vec<SparseVector> = perm
                .iter()
                .enumerate()
                .map(|(k, &i)| m.row(i).scaled(&rat(k as i64 + 2, (i as i64 % 3) + 1)))
                .collect();
            let shuffled = SparseMatrix::from_rows(m.ncols(), &scaled).unwrap();
            prop_assert_eq!(rank(&shuffled), rank(&m));
        }
    }
}
