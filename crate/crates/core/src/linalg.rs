//! Sparse exact linear algebra over the rationals and over prime fields.
//!
//! Elimination picks pivots by a Markowitz cost `(c - 1)(r - 1)` (column and
//! row counts) over the sparsest few columns, breaking ties by row and then
//! column index, so rank computations and particular solutions are
//! reproducible run to run.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::LinalgError;
use crate::rational::{format_rational, parse_rational, Rational};

/// 2^61 - 1.
pub const DEFAULT_PRIME: u64 = (1 << 61) - 1;

/// How many of the sparsest columns the Markowitz search inspects per pivot.
const MARKOWITZ_COLUMNS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankMode {
    Exact,
    Modular(u64),
}

impl Default for RankMode {
    fn default() -> Self {
        RankMode::Modular(DEFAULT_PRIME)
    }
}

/// Column-major sparse matrix with nonzero rational entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseRationalMatrix {
    rows: usize,
    cols: usize,
    /// Per column, `(row, value)` sorted by row; no stored zeros.
    columns: Vec<Vec<(usize, Rational)>>,
}

impl SparseRationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseRationalMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SparseRationalMatrix::zeros(n, n);
        for i in 0..n {
            m.columns[i].push((i, Rational::one()));
        }
        m
    }

    /// Builds from `(row, col, value)`; repeated coordinates are summed and
    /// zero results dropped. Panics on out-of-range indices.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut acc: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "entry ({r}, {c}) out of range");
            *acc.entry((c, r)).or_insert_with(Rational::zero) += v;
        }
        let mut m = SparseRationalMatrix::zeros(rows, cols);
        for ((c, r), v) in acc {
            if !v.is_zero() {
                m.columns[c].push((r, v));
            }
        }
        m
    }

    /// Builds from per-column `(row, value)` lists.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(usize, Rational)>>) -> Self {
        let cols = columns.len();
        let triplets = columns
            .into_iter()
            .enumerate()
            .flat_map(|(c, col)| col.into_iter().map(move |(r, v)| (r, c, v)));
        SparseRationalMatrix::from_triplets(rows, cols, triplets)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn get(&self, row: usize, col: usize) -> Rational {
        self.columns[col]
            .binary_search_by_key(&row, |e| e.0)
            .map(|i| self.columns[col][i].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    pub fn column(&self, col: usize) -> &[(usize, Rational)] {
        &self.columns[col]
    }

    /// `(row, col, value)` in column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![Rational::zero(); self.rows];
        for (r, c, v) in self.triplets() {
            if !x[c].is_zero() {
                y[r] += v * &x[c];
            }
        }
        y
    }

    /// Appends the columns of `other` (same row count) to the right.
    pub fn hstack(&self, other: &SparseRationalMatrix) -> SparseRationalMatrix {
        assert_eq!(self.rows, other.rows);
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().cloned());
        SparseRationalMatrix {
            rows: self.rows,
            cols: self.cols + other.cols,
            columns,
        }
    }

    /// Coordinate-list text: header `rows cols nnz`, then `row col p/q`
    /// lines, 1-based, column-major.
    pub fn to_dump(&self) -> String {
        let mut out = format!("{} {} {}\n", self.rows, self.cols, self.nnz());
        for (r, c, v) in self.triplets() {
            let _ = writeln!(out, "{} {} {}", r + 1, c + 1, format_rational(v));
        }
        out
    }

    pub fn from_dump(text: &str) -> Result<Self, LinalgError> {
        let bad = |msg: &str| LinalgError::MalformedDump(msg.to_string());
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<usize> = lines
            .next()
            .ok_or_else(|| bad("missing header"))?
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad("header")))
            .collect::<Result<_, _>>()?;
        let [rows, cols, nnz] = header[..] else {
            return Err(bad("header needs three fields"));
        };
        let mut triplets = Vec::with_capacity(nnz);
        for line in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [r, c, v] = fields[..] else {
                return Err(bad(line));
            };
            let r: usize = r.parse().map_err(|_| bad(line))?;
            let c: usize = c.parse().map_err(|_| bad(line))?;
            if r == 0 || c == 0 || r > rows || c > cols {
                return Err(bad(line));
            }
            let v = parse_rational(v).map_err(|_| bad(line))?;
            triplets.push((r - 1, c - 1, v));
        }
        if triplets.len() != nnz {
            return Err(bad("entry count differs from header"));
        }
        Ok(SparseRationalMatrix::from_triplets(rows, cols, triplets))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelSolution {
    /// Values on every column, fixed coordinates included.
    pub particular: Vec<Rational>,
    /// Dimension of the kernel of the unconstrained matrix.
    pub nullity: usize,
    /// Dimension of the affine space of solutions honoring the constraints.
    pub free_parameter_count: usize,
}

pub fn rank(m: &SparseRationalMatrix, mode: RankMode) -> Result<usize, LinalgError> {
    match mode {
        RankMode::Exact => {
            let rows = row_lists(m, |v| Some(v.clone()), |_| true);
            let mut elim = Elimination::new(RationalField, m.cols, rows.unwrap(), None);
            elim.run(|_| true);
            Ok(elim.pivots.len())
        }
        RankMode::Modular(p) => {
            let field = PrimeField::new(p)?;
            let rows = row_lists_modular(m, &field)?;
            let mut elim = Elimination::new(field, m.cols, rows, None);
            elim.run(|_| true);
            Ok(elim.pivots.len())
        }
    }
}

pub fn nullity(m: &SparseRationalMatrix, mode: RankMode) -> Result<usize, LinalgError> {
    Ok(m.cols - rank(m, mode)?)
}

/// Solves `m x = 0` with the coordinates in `fixed` prescribed. Every other
/// column not chosen as a pivot is set to zero.
pub fn solve_kernel(
    m: &SparseRationalMatrix,
    fixed: &BTreeMap<usize, Rational>,
) -> Result<KernelSolution, LinalgError> {
    if let Some((&col, _)) = fixed.iter().find(|(&c, _)| c >= m.cols) {
        return Err(LinalgError::ColumnOutOfRange { col, cols: m.cols });
    }
    let nullity = nullity(m, RankMode::Exact)?;
    let mut rhs = vec![Rational::zero(); m.rows];
    for (&c, value) in fixed {
        for (r, v) in &m.columns[c] {
            rhs[*r] -= v * value;
        }
    }
    let rows = row_lists(m, |v| Some(v.clone()), |c| !fixed.contains_key(&c)).unwrap();
    let mut elim = Elimination::new(RationalField, m.cols, rows, Some(rhs));
    elim.run(|_| true);
    let rhs = elim.rhs.as_ref().expect("rhs present");
    let pivot_rows: BTreeSet<usize> = elim.pivots.iter().map(|p| p.0).collect();
    for (r, value) in rhs.iter().enumerate() {
        if !pivot_rows.contains(&r) && !value.is_zero() {
            return Err(LinalgError::Inconsistent);
        }
    }
    let mut x = vec![Rational::zero(); m.cols];
    for (&c, v) in fixed {
        x[c] = v.clone();
    }
    for &(r, c) in elim.pivots.iter().rev() {
        let mut acc = rhs[r].clone();
        let mut pivot = None;
        for (j, a) in &elim.rows[r] {
            if *j == c {
                pivot = Some(a);
            } else if !x[*j].is_zero() {
                acc -= a * &x[*j];
            }
        }
        x[c] = acc / pivot.expect("pivot entry");
    }
    debug_assert!(m.apply(&x).iter().all(Zero::is_zero));
    let free_columns = m.cols - fixed.len();
    Ok(KernelSolution {
        particular: x,
        nullity,
        free_parameter_count: free_columns - elim.pivots.len(),
    })
}

fn row_lists<T>(
    m: &SparseRationalMatrix,
    convert: impl Fn(&Rational) -> Option<T>,
    keep_col: impl Fn(usize) -> bool,
) -> Option<Vec<Vec<(usize, T)>>> {
    let mut rows: Vec<Vec<(usize, T)>> = (0..m.rows).map(|_| Vec::new()).collect();
    for (c, col) in m.columns.iter().enumerate() {
        if !keep_col(c) {
            continue;
        }
        for (r, v) in col {
            rows[*r].push((c, convert(v)?));
        }
    }
    Some(rows)
}

fn row_lists_modular(
    m: &SparseRationalMatrix,
    field: &PrimeField,
) -> Result<Vec<Vec<(usize, u64)>>, LinalgError> {
    let mut rows: Vec<Vec<(usize, u64)>> = vec![Vec::new(); m.rows];
    for (r, c, v) in m.triplets() {
        let value = field
            .reduce(v)
            .ok_or(LinalgError::PrimeDividesDenominator {
                prime: field.p,
                row: r,
                col: c,
            })?;
        if value != 0 {
            rows[r].push((c, value));
        }
    }
    Ok(rows)
}

pub(crate) trait Field {
    type Elem: Clone;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// `a - f * b`
    fn sub_mul(&self, a: &Self::Elem, f: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg_mul(&self, f: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
}

pub(crate) struct RationalField;

impl Field for RationalField {
    type Elem = Rational;

    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }

    fn sub_mul(&self, a: &Rational, f: &Rational, b: &Rational) -> Rational {
        a - f * b
    }

    fn neg_mul(&self, f: &Rational, b: &Rational) -> Rational {
        -(f * b)
    }

    fn div(&self, a: &Rational, b: &Rational) -> Rational {
        a / b
    }
}

pub(crate) struct PrimeField {
    p: u64,
}

impl PrimeField {
    fn new(p: u64) -> Result<Self, LinalgError> {
        if p >= 1 << 63 || !is_prime(p) {
            return Err(LinalgError::BadModulus(p));
        }
        Ok(PrimeField { p })
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn inv(&self, a: u64) -> u64 {
        pow_mod(a, self.p - 2, self.p)
    }

    /// Image of a rational in the field, `None` if `p` divides the denominator.
    fn reduce(&self, v: &Rational) -> Option<u64> {
        let p = BigInt::from(self.p);
        let num = v.numer().mod_floor(&p).to_u64().expect("residue fits");
        let den = v.denom().mod_floor(&p).to_u64().expect("residue fits");
        if den == 0 {
            return None;
        }
        Some(self.mul(num, self.inv(den)))
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn sub_mul(&self, a: &u64, f: &u64, b: &u64) -> u64 {
        let fb = self.mul(*f, *b);
        if *a >= fb {
            a - fb
        } else {
            a + (self.p - fb)
        }
    }

    fn neg_mul(&self, f: &u64, b: &u64) -> u64 {
        let fb = self.mul(*f, *b);
        if fb == 0 {
            0
        } else {
            self.p - fb
        }
    }

    fn div(&self, a: &u64, b: &u64) -> u64 {
        self.mul(*a, self.inv(*b))
    }
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut b = base as u128 % m as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m as u128;
        }
        b = b * b % m as u128;
        exp >>= 1;
    }
    base = acc as u64;
    base
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Sparse Gaussian elimination. Pivot rows are kept for back-substitution;
/// the pivot column is cleared from all rows not yet pivoted.
pub(crate) struct Elimination<F: Field> {
    field: F,
    rows: Vec<Vec<(usize, F::Elem)>>,
    rhs: Option<Vec<F::Elem>>,
    col_rows: Vec<BTreeSet<usize>>,
    /// `(row, col)` in the order chosen.
    pivots: Vec<(usize, usize)>,
}

impl<F: Field> Elimination<F> {
    fn new(
        field: F,
        cols: usize,
        rows: Vec<Vec<(usize, F::Elem)>>,
        rhs: Option<Vec<F::Elem>>,
    ) -> Self {
        let mut col_rows = vec![BTreeSet::new(); cols];
        for (r, row) in rows.iter().enumerate() {
            for (c, _) in row {
                col_rows[*c].insert(r);
            }
        }
        Elimination {
            field,
            rows,
            rhs,
            col_rows,
            pivots: Vec::new(),
        }
    }

    fn run(&mut self, allowed: impl Fn(usize) -> bool) {
        while let Some((r, c)) = self.choose_pivot(&allowed) {
            self.eliminate(r, c);
        }
    }

    fn choose_pivot(&self, allowed: &impl Fn(usize) -> bool) -> Option<(usize, usize)> {
        let mut candidates: Vec<(usize, usize)> = Vec::with_capacity(MARKOWITZ_COLUMNS + 1);
        for (c, set) in self.col_rows.iter().enumerate() {
            let count = set.len();
            if count == 0 || !allowed(c) {
                continue;
            }
            if candidates.len() < MARKOWITZ_COLUMNS
                || (count, c) < *candidates.last().expect("non-empty")
            {
                let at = candidates.partition_point(|x| *x < (count, c));
                candidates.insert(at, (count, c));
                candidates.truncate(MARKOWITZ_COLUMNS);
            }
        }
        // (cost, row, col)
        let mut best: Option<(usize, usize, usize)> = None;
        for &(count, c) in &candidates {
            for &r in &self.col_rows[c] {
                let cost = (count - 1) * (self.rows[r].len() - 1);
                let key = (cost, r, c);
                if best.is_none_or(|k| key < k) {
                    best = Some(key);
                }
            }
        }
        best.map(|(_, r, c)| (r, c))
    }

    fn eliminate(&mut self, pr: usize, pc: usize) {
        let pivot_row = std::mem::take(&mut self.rows[pr]);
        let pivot_value = pivot_row
            .iter()
            .find(|(c, _)| *c == pc)
            .map(|(_, v)| v.clone())
            .expect("pivot in row");
        for (c, _) in &pivot_row {
            self.col_rows[*c].remove(&pr);
        }
        let targets: Vec<usize> = self.col_rows[pc].iter().copied().collect();
        for r in targets {
            let row = std::mem::take(&mut self.rows[r]);
            let entry = row
                .iter()
                .find(|(c, _)| *c == pc)
                .map(|(_, v)| v.clone())
                .expect("column entry");
            let factor = self.field.div(&entry, &pivot_value);
            let merged = self.axpy(&row, &factor, &pivot_row, r);
            self.rows[r] = merged;
            if let Some(rhs) = self.rhs.as_mut() {
                rhs[r] = self.field.sub_mul(&rhs[r], &factor, &rhs[pr]);
            }
        }
        self.rows[pr] = pivot_row;
        self.pivots.push((pr, pc));
    }

    /// `row - factor * pivot`, keeping `col_rows` in sync for row `r`.
    fn axpy(
        &mut self,
        row: &[(usize, F::Elem)],
        factor: &F::Elem,
        pivot: &[(usize, F::Elem)],
        r: usize,
    ) -> Vec<(usize, F::Elem)> {
        let mut out = Vec::with_capacity(row.len() + pivot.len());
        let (mut i, mut j) = (0, 0);
        while i < row.len() || j < pivot.len() {
            let take_row = j == pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
            let take_pivot = i == row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
            if take_row {
                out.push(row[i].clone());
                i += 1;
            } else if take_pivot {
                let c = pivot[j].0;
                let v = self.field.neg_mul(factor, &pivot[j].1);
                if !self.field.is_zero(&v) {
                    self.col_rows[c].insert(r);
                    out.push((c, v));
                }
                j += 1;
            } else {
                let c = row[i].0;
                let v = self.field.sub_mul(&row[i].1, factor, &pivot[j].1);
                if self.field.is_zero(&v) {
                    self.col_rows[c].remove(&r);
                } else {
                    out.push((c, v));
                }
                i += 1;
                j += 1;
            }
        }
        out
    }
}
