//! Exact linear algebra over the rationals.
//!
//! Vectors and matrices are stored sparsely (sorted `(index, value)` pairs,
//! no stored zeros). All elimination goes through [`Echelon`], an incremental
//! reduced row echelon form whose pivot rows are kept fully back-reduced, so
//! rank, kernels, images and solves all read off the same structure.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Matrices with at most this many rows and columns use the dense path by default.
pub const DEFAULT_DENSE_THRESHOLD: usize = 64;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Sparse rational vector with sorted, nonzero entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VectorQ {
    dim: usize,
    entries: Vec<(usize, Rational)>,
}

impl VectorQ {
    pub fn zeros(dim: usize) -> Self {
        VectorQ {
            dim,
            entries: Vec::new(),
        }
    }

    pub fn unit(dim: usize, index: usize) -> Self {
        assert!(index < dim, "unit index {index} out of range for dim {dim}");
        VectorQ {
            dim,
            entries: vec![(index, Rational::one())],
        }
    }

    /// Builds a vector from arbitrary `(index, value)` pairs; duplicates are summed.
    pub fn from_pairs(dim: usize, pairs: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut pairs: Vec<_> = pairs.into_iter().collect();
        pairs.sort_by_key(|(i, _)| *i);
        let mut entries: Vec<(usize, Rational)> = Vec::with_capacity(pairs.len());
        for (i, v) in pairs {
            assert!(i < dim, "index {i} out of range for dim {dim}");
            match entries.last_mut() {
                Some((j, acc)) if *j == i => *acc += v,
                _ => entries.push((i, v)),
            }
        }
        entries.retain(|(_, v)| !v.is_zero());
        VectorQ { dim, entries }
    }

    pub fn from_dense(values: &[Rational]) -> Self {
        VectorQ {
            dim: values.len(),
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        }
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Self::from_dense(&values.iter().map(|&v| rat(v)).collect::<Vec<_>>())
    }

    pub fn dim(&self) -> usize {
        self.dim
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
            Ok(pos) => self.entries[pos].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    fn get_ref(&self, index: usize) -> Option<&Rational> {
        self.entries
            .binary_search_by_key(&index, |(i, _)| *i)
            .ok()
            .map(|pos| &self.entries[pos].1)
    }

    pub fn to_dense(&self) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn scale(&mut self, c: &Rational) {
        if c.is_zero() {
            self.entries.clear();
        } else {
            for (_, v) in &mut self.entries {
                *v *= c;
            }
        }
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        let mut out = self.clone();
        out.scale(c);
        out
    }

    /// `self += c * other`
    pub fn axpy(&mut self, c: &Rational, other: &VectorQ) {
        assert_eq!(self.dim, other.dim, "axpy dimension mismatch");
        if c.is_zero() || other.is_zero() {
            return;
        }
        let mut merged = Vec::with_capacity(self.entries.len() + other.entries.len());
        let mut a = std::mem::take(&mut self.entries).into_iter().peekable();
        let mut b = other.entries.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, _)), Some((j, _))) if i < j => merged.push(a.next().unwrap()),
                (Some((i, _)), Some((j, _))) if i > j => {
                    let (j, v) = b.next().unwrap();
                    merged.push((*j, c * v));
                }
                (Some(_), Some(_)) => {
                    let (i, mut v) = a.next().unwrap();
                    let (_, w) = b.next().unwrap();
                    v += c * w;
                    if !v.is_zero() {
                        merged.push((i, v));
                    }
                }
                (Some(_), None) => merged.push(a.next().unwrap()),
                (None, Some(_)) => {
                    let (j, v) = b.next().unwrap();
                    merged.push((*j, c * v));
                }
                (None, None) => break,
            }
        }
        self.entries = merged;
    }

    pub fn add(&self, other: &VectorQ) -> Self {
        let mut out = self.clone();
        out.axpy(&Rational::one(), other);
        out
    }

    pub fn sub(&self, other: &VectorQ) -> Self {
        let mut out = self.clone();
        out.axpy(&-Rational::one(), other);
        out
    }

    pub fn dot(&self, other: &VectorQ) -> Rational {
        let mut acc = Rational::zero();
        for (i, v) in &self.entries {
            if let Some(w) = other.get_ref(*i) {
                acc += v * w;
            }
        }
        acc
    }

    /// Places this vector at `offset` inside a vector of dimension `dim`.
    pub fn embed(&self, dim: usize, offset: usize) -> Self {
        assert!(offset + self.dim <= dim);
        VectorQ {
            dim,
            entries: self
                .entries
                .iter()
                .map(|(i, v)| (i + offset, v.clone()))
                .collect(),
        }
    }

    /// The coordinates in `[start, start + len)`, re-indexed from zero.
    pub fn slice(&self, start: usize, len: usize) -> Self {
        VectorQ {
            dim: len,
            entries: self
                .entries
                .iter()
                .filter(|(i, _)| *i >= start && *i < start + len)
                .map(|(i, v)| (i - start, v.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for VectorQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.to_dense().iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Sparse rational matrix stored by rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<VectorQ>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            data: vec![VectorQ::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            rows: n,
            cols: n,
            data: (0..n).map(|i| VectorQ::unit(n, i)).collect(),
        }
    }

    pub fn diagonal(values: &[Rational]) -> Self {
        let n = values.len();
        SparseMatrix {
            rows: n,
            cols: n,
            data: values
                .iter()
                .enumerate()
                .map(|(i, v)| VectorQ::from_pairs(n, [(i, v.clone())]))
                .collect(),
        }
    }

    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Rational)>,
    ) -> Self {
        let mut per_row: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); rows];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "entry ({r}, {c}) out of bounds");
            per_row[r].push((c, v));
        }
        SparseMatrix {
            rows,
            cols,
            data: per_row
                .into_iter()
                .map(|pairs| VectorQ::from_pairs(cols, pairs))
                .collect(),
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<VectorQ>) -> Self {
        assert!(rows.iter().all(|r| r.dim == cols));
        SparseMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    pub fn from_columns(rows: usize, columns: &[VectorQ]) -> Self {
        let cols = columns.len();
        let mut triplets = Vec::new();
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.dim, rows);
            for (r, v) in &col.entries {
                triplets.push((*r, c, v.clone()));
            }
        }
        Self::from_triplets(rows, cols, triplets)
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        SparseMatrix {
            rows: rows.len(),
            cols,
            data: rows
                .iter()
                .map(|r| {
                    assert_eq!(r.len(), cols);
                    VectorQ::from_ints(r)
                })
                .collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(VectorQ::nnz).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(VectorQ::is_zero)
    }

    pub fn row(&self, r: usize) -> &VectorQ {
        &self.data[r]
    }

    pub fn row_vectors(&self) -> &[VectorQ] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.data[r].get(c)
    }

    /// All stored entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.entries.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn column(&self, c: usize) -> VectorQ {
        VectorQ::from_pairs(
            self.rows,
            self.data
                .iter()
                .enumerate()
                .filter_map(|(r, row)| row.get_ref(c).map(|v| (r, v.clone()))),
        )
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(
            self.cols,
            self.rows,
            self.entries().map(|(r, c, v)| (c, r, v.clone())),
        )
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|r| r.scaled(c)).collect(),
        }
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc = VectorQ::zeros(other.cols);
                for (k, v) in &row.entries {
                    acc.axpy(v, &other.data[*k]);
                }
                acc
            })
            .collect();
        Ok(SparseMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    pub fn mul_vec(&self, v: &VectorQ) -> Result<VectorQ> {
        if v.dim != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot apply {}x{} matrix to vector of dim {}",
                self.rows, self.cols, v.dim
            )));
        }
        Ok(VectorQ::from_pairs(
            self.rows,
            self.data.iter().enumerate().map(|(r, row)| (r, row.dot(v))),
        ))
    }

    /// Concatenates matrices with equal row counts side by side.
    pub fn hstack(rows: usize, blocks: &[&SparseMatrix]) -> Result<Self> {
        if let Some(b) = blocks.iter().find(|b| b.rows != rows) {
            return Err(Error::DimensionMismatch(format!(
                "hstack expects {rows} rows, got {}",
                b.rows
            )));
        }
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut triplets = Vec::new();
        let mut offset = 0;
        for b in blocks {
            triplets.extend(b.entries().map(|(r, c, v)| (r, c + offset, v.clone())));
            offset += b.cols;
        }
        Ok(Self::from_triplets(rows, cols, triplets))
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        self.data.iter().map(VectorQ::to_dense).collect()
    }
}

impl fmt::Display for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.data {
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

/// Reduced row echelon form built one row at a time.
///
/// Every stored row has a pivot column carrying `1`, and every pivot column is
/// zero in all other stored rows. Pivots are chosen in the sparsest available
/// column (fewest occurrences among stored rows) to limit fill-in; the set of
/// pivot columns therefore need not be the leftmost one.
#[derive(Clone, Debug)]
pub struct Echelon {
    cols: usize,
    pivot_limit: usize,
    rows: Vec<VectorQ>,
    pivots: Vec<usize>,
    row_of_col: Vec<Option<usize>>,
    col_count: Vec<usize>,
}

impl Echelon {
    pub fn new(cols: usize) -> Self {
        Self::with_pivot_limit(cols, cols)
    }

    /// Columns at or beyond `pivot_limit` never become pivots (augmented columns).
    pub fn with_pivot_limit(cols: usize, pivot_limit: usize) -> Self {
        assert!(pivot_limit <= cols);
        Echelon {
            cols,
            pivot_limit,
            rows: Vec::new(),
            pivots: Vec::new(),
            row_of_col: vec![None; cols],
            col_count: vec![0; cols],
        }
    }

    /// Sparse elimination of every row of `m`.
    pub fn from_matrix(m: &SparseMatrix) -> Self {
        let mut e = Echelon::new(m.cols);
        for row in &m.data {
            e.insert(row.clone());
        }
        e
    }

    /// Dense Gauss–Jordan elimination, leftmost nonzero pivot.
    pub fn from_matrix_dense(m: &SparseMatrix) -> Self {
        let mut a = m.to_dense();
        let mut pivot_cols = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let inv = a[r][c].recip();
            for v in a[r].iter_mut() {
                *v *= &inv;
            }
            let pivot_row = a[r].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i != r && !row[c].is_zero() {
                    let factor = row[c].clone();
                    for (x, y) in row.iter_mut().zip(&pivot_row) {
                        if !y.is_zero() {
                            *x -= &factor * y;
                        }
                    }
                }
            }
            pivot_cols.push(c);
            r += 1;
        }
        let mut e = Echelon::new(m.cols);
        for (row, &c) in a.into_iter().take(r).zip(&pivot_cols) {
            e.push_row(VectorQ::from_dense(&row), c);
        }
        e
    }

    /// Dense below the threshold in both dimensions, sparse otherwise.
    pub fn from_matrix_auto(m: &SparseMatrix, dense_threshold: usize) -> Self {
        if m.rows <= dense_threshold && m.cols <= dense_threshold {
            Self::from_matrix_dense(m)
        } else {
            Self::from_matrix(m)
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_rows(&self) -> &[VectorQ] {
        &self.rows
    }

    /// Reduces `v` against the stored rows; the result is zero on every pivot column.
    pub fn reduce(&self, v: &VectorQ) -> VectorQ {
        assert_eq!(v.dim, self.cols, "reduce dimension mismatch");
        let coefficients: Vec<(usize, Rational)> = v
            .entries
            .iter()
            .filter_map(|(c, val)| self.row_of_col[*c].map(|r| (r, val.clone())))
            .collect();
        let mut out = v.clone();
        for (r, coef) in coefficients {
            out.axpy(&-coef, &self.rows[r]);
        }
        out
    }

    pub fn contains(&self, v: &VectorQ) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the row space. Returns the new pivot column when `v` was
    /// independent of the stored rows. A residue supported only on columns
    /// beyond the pivot limit is discarded and reported as `Err(residue)`.
    pub fn try_insert(&mut self, v: VectorQ) -> std::result::Result<Option<usize>, VectorQ> {
        let w = self.reduce(&v);
        if w.is_zero() {
            return Ok(None);
        }
        let pivot = w
            .entries
            .iter()
            .filter(|(c, _)| *c < self.pivot_limit)
            .min_by_key(|(c, _)| (self.col_count[*c], *c))
            .map(|(c, _)| *c);
        let Some(pivot) = pivot else {
            return Err(w);
        };
        let mut w = w;
        let inv = w.get(pivot).recip();
        w.scale(&inv);
        for r in 0..self.rows.len() {
            let coef = match self.rows[r].get_ref(pivot) {
                Some(c) => c.clone(),
                None => continue,
            };
            self.uncount(r);
            self.rows[r].axpy(&-coef, &w);
            self.count(r);
        }
        self.push_row(w, pivot);
        Ok(Some(pivot))
    }

    pub fn insert(&mut self, v: VectorQ) -> Option<usize> {
        self.try_insert(v).unwrap_or(None)
    }

    fn push_row(&mut self, row: VectorQ, pivot: usize) {
        self.row_of_col[pivot] = Some(self.rows.len());
        self.pivots.push(pivot);
        self.rows.push(row);
        self.count(self.rows.len() - 1);
    }

    fn count(&mut self, r: usize) {
        for (c, _) in &self.rows[r].entries {
            self.col_count[*c] += 1;
        }
    }

    fn uncount(&mut self, r: usize) {
        for (c, _) in &self.rows[r].entries {
            self.col_count[*c] -= 1;
        }
    }

    /// Basis of the right null space of the eliminated rows, one vector per
    /// non-pivot column below the pivot limit, in increasing column order.
    pub fn kernel_basis(&self) -> Vec<VectorQ> {
        let n = self.pivot_limit;
        (0..n)
            .filter(|&c| self.row_of_col[c].is_none())
            .map(|free| {
                let mut pairs = vec![(free, Rational::one())];
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    if let Some(v) = row.get_ref(free) {
                        pairs.push((p, -v.clone()));
                    }
                }
                VectorQ::from_pairs(n, pairs)
            })
            .collect()
    }
}

pub fn rank(m: &SparseMatrix) -> usize {
    eliminate(m).rank()
}

fn eliminate(m: &SparseMatrix) -> Echelon {
    Echelon::from_matrix_auto(m, DEFAULT_DENSE_THRESHOLD)
}

/// Basis of `{v : m v = 0}`; its length is `cols - rank`.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<VectorQ> {
    eliminate(m).kernel_basis()
}

/// Independent columns of `m` spanning its image.
pub fn column_space_basis(m: &SparseMatrix) -> Vec<VectorQ> {
    let mut pivots = eliminate(m).pivots.clone();
    pivots.sort_unstable();
    pivots.into_iter().map(|c| m.column(c)).collect()
}

/// Some `x` with `m x = b`, or `None` when `b` is not in the image of `m`.
pub fn solve(m: &SparseMatrix, b: &VectorQ) -> Result<Option<VectorQ>> {
    Ok(solve_many(m, std::slice::from_ref(b))?.map(|mut xs| xs.pop().unwrap()))
}

/// Solves `m x_k = b_k` for every right-hand side at once. `None` if any is inconsistent.
pub fn solve_many(m: &SparseMatrix, rhs: &[VectorQ]) -> Result<Option<Vec<VectorQ>>> {
    if let Some(b) = rhs.iter().find(|b| b.dim != m.rows) {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has dim {}, matrix has {} rows",
            b.dim, m.rows
        )));
    }
    let n = m.cols;
    let k = rhs.len();
    let mut extra: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); m.rows];
    for (j, b) in rhs.iter().enumerate() {
        for (r, v) in &b.entries {
            extra[*r].push((n + j, v.clone()));
        }
    }
    let mut e = Echelon::with_pivot_limit(n + k, n);
    for (row, ext) in m.data.iter().zip(extra) {
        let augmented = VectorQ::from_pairs(n + k, row.entries.iter().cloned().chain(ext));
        if e.try_insert(augmented).is_err() {
            return Ok(None);
        }
    }
    let mut solutions = vec![Vec::new(); k];
    for (row, &p) in e.rows.iter().zip(&e.pivots) {
        for (c, v) in &row.entries {
            if *c >= n {
                solutions[c - n].push((p, v.clone()));
            }
        }
    }
    Ok(Some(
        solutions
            .into_iter()
            .map(|pairs| VectorQ::from_pairs(n, pairs))
            .collect(),
    ))
}

/// Rank of the span of a list of vectors of common dimension.
pub fn span_rank(dim: usize, vectors: &[VectorQ]) -> usize {
    let mut e = Echelon::new(dim);
    for v in vectors {
        e.insert(v.clone());
    }
    e.rank()
}
