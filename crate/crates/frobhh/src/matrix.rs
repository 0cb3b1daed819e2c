//! Exact dense and sparse matrices over a prime field.
//!
//! Everything downstream (cochain differentials, chain-map identities,
//! cohomology dimensions) reduces to rank, kernel and solve calls on these
//! types. There are no tolerances anywhere: equality means equality in
//! `F_p`.
//!
//! Rank of a [`SparseMatrix`] runs a Markowitz-style elimination (pivot
//! chosen to approximately minimise fill-in) and falls back to dense
//! elimination once the live submatrix exceeds a density threshold
//! (default 0.2). Dense elimination keeps entries unreduced in `u64`
//! accumulators when the modulus is small enough, which avoids a division
//! per inner-loop step.

use crate::error::{Error, Result};
use crate::field::{PrimeField, Scalar};
use std::cmp::Reverse;
use std::collections::BinaryHeap;

/// Default live-submatrix density at which sparse elimination hands over
/// to the dense kernel.
pub const DEFAULT_DENSITY_THRESHOLD: f64 = 0.2;

/// Moduli below this bound use delayed reduction in dense elimination:
/// with p < 2^15 an entry grows by at most (p-1)^2 < 2^30 per pivot step,
/// so u64 accumulators cannot overflow across any realistic elimination.
const LAZY_MODULUS_BOUND: u64 = 1 << 15;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl DenseMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        DenseMatrix { field, rows, cols, data: vec![Scalar::ZERO; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(
        field: PrimeField,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Self {
        let mut m = Self::zeros(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(field: PrimeField, rows: usize, cols: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(field, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for i in 0..rows {
                m.set(i, j, c[i]);
            }
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "dense mul shape mismatch");
        let f = self.field;
        let mut out = DenseMatrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out.get(i, j);
                    out.set(i, j, f.mul_add(cur, a, other.get(k, j)));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "dense mul_vec shape mismatch");
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::ZERO;
                for j in 0..self.cols {
                    acc = f.mul_add(acc, self.get(i, j), v[j]);
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a = f.add(*a, *b);
        }
        out
    }

    pub fn sub(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a = f.sub(*a, *b);
        }
        out
    }

    pub fn scale(&self, s: Scalar) -> DenseMatrix {
        let f = self.field;
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = f.mul(*a, s);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|s| s.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    self.get(i, j) == if i == j { self.field.one() } else { Scalar::ZERO }
                })
            })
    }

    pub fn rank(&self) -> usize {
        Eliminator::new(self.field, self.cols).rank_of_rows(self.iter_rows())
    }

    fn iter_rows(&self) -> impl Iterator<Item = Vec<(u32, Scalar)>> + '_ {
        (0..self.rows).map(move |i| {
            (0..self.cols)
                .filter_map(|j| {
                    let v = self.get(i, j);
                    (!v.is_zero()).then_some((j as u32, v))
                })
                .collect()
        })
    }

    /// A basis of `ker M` as column vectors, deterministic in the column
    /// enumeration order (free columns in increasing order).
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let f = self.field;
        let (rref, pivots) = self.reduced_row_echelon();
        let pivot_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut basis = Vec::new();
        for j in 0..self.cols {
            if pivot_of_col[j].is_some() {
                continue;
            }
            let mut vec = vec![Scalar::ZERO; self.cols];
            vec[j] = f.one();
            for (r, &c) in pivots.iter().enumerate() {
                vec[c] = f.neg(rref.get(r, j));
            }
            basis.push(vec);
        }
        basis
    }

    /// Returns `(RREF, pivot column per pivot row)`.
    pub fn reduced_row_echelon(&self) -> (DenseMatrix, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            for j in 0..m.cols {
                let tmp = m.get(r, j);
                m.set(r, j, m.get(pr, j));
                m.set(pr, j, tmp);
            }
            let inv = f.inv(m.get(r, c));
            for j in c..m.cols {
                m.set(r, j, f.mul(m.get(r, j), inv));
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let s = m.get(i, c);
                if s.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(s, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
            if r == m.rows {
                break;
            }
        }
        (m, pivots)
    }

    /// Any solution `x` of `Mx = v`, with free variables set to zero.
    pub fn solve(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve: rhs has length {}, matrix has {} rows",
                v.len(),
                self.rows
            )));
        }
        let f = self.field;
        let mut aug = DenseMatrix::zeros(f, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, v[i]);
        }
        let (rref, pivots) = aug.reduced_row_echelon();
        // A pivot in the rhs column means the system is inconsistent.
        if pivots.last() == Some(&self.cols) {
            return Err(Error::NoSolution);
        }
        let mut x = vec![Scalar::ZERO; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = rref.get(r, self.cols);
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<DenseMatrix> {
        if self.rows != self.cols {
            return Err(Error::NotInvertible);
        }
        let f = self.field;
        let n = self.rows;
        let mut aug = DenseMatrix::zeros(f, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, f.one());
        }
        let (rref, pivots) = aug.reduced_row_echelon();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::NotInvertible);
        }
        Ok(DenseMatrix::from_fn(f, n, n, |i, j| rref.get(i, n + j)))
    }

    /// Least `r <= cap` with `M^r = I`.
    pub fn order(&self, cap: u64) -> Result<u64> {
        if self.rows != self.cols || self.rank() < self.rows {
            return Err(Error::NotInvertible);
        }
        let mut acc = self.clone();
        for r in 1..=cap {
            if acc.is_identity() {
                return Ok(r);
            }
            acc = acc.mul(self);
        }
        Err(Error::CapExceeded(cap))
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        let mut t = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                if !v.is_zero() {
                    t.push((i as u32, j as u32, v));
                }
            }
        }
        SparseMatrix::from_triplets(self.field, self.rows, self.cols, t)
    }
}

/// Coordinate-format sparse matrix: entries sorted by `(row, col)`, no
/// duplicates, no stored zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    entries: Vec<(u32, u32, Scalar)>,
}

impl SparseMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        SparseMatrix { field, rows, cols, entries: Vec::new() }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let entries = (0..n as u32).map(|i| (i, i, field.one())).collect();
        SparseMatrix { field, rows: n, cols: n, entries }
    }

    /// Canonicalises arbitrary triplets: sorts, sums duplicate positions,
    /// drops zeros.
    pub fn from_triplets(
        field: PrimeField,
        rows: usize,
        cols: usize,
        mut t: Vec<(u32, u32, Scalar)>,
    ) -> Self {
        t.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut entries: Vec<(u32, u32, Scalar)> = Vec::with_capacity(t.len());
        for (r, c, v) in t {
            debug_assert!((r as usize) < rows && (c as usize) < cols);
            match entries.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 = field.add(last.2, v),
                _ => entries.push((r, c, v)),
            }
        }
        entries.retain(|e| !e.2.is_zero());
        SparseMatrix { field, rows, cols, entries }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(u32, u32, Scalar)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self.entries.len() == self.rows
            && self
                .entries
                .iter()
                .enumerate()
                .all(|(i, &(r, c, v))| r as usize == i && c as usize == i && v == self.field.one())
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.field, self.rows, self.cols);
        for &(r, c, v) in &self.entries {
            m.set(r as usize, c as usize, v);
        }
        m
    }

    pub fn transpose(&self) -> SparseMatrix {
        let t = self.entries.iter().map(|&(r, c, v)| (c, r, v)).collect();
        SparseMatrix::from_triplets(self.field, self.cols, self.rows, t)
    }

    pub fn scale(&self, s: Scalar) -> SparseMatrix {
        let f = self.field;
        let t = self.entries.iter().map(|&(r, c, v)| (r, c, f.mul(v, s))).collect();
        SparseMatrix::from_triplets(f, self.rows, self.cols, t)
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut t = self.entries.clone();
        t.extend_from_slice(&other.entries);
        SparseMatrix::from_triplets(self.field, self.rows, self.cols, t)
    }

    pub fn sub(&self, other: &SparseMatrix) -> SparseMatrix {
        self.add(&other.scale(self.field.neg(self.field.one())))
    }

    /// Sparse product `self * other`, accumulated column by column.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows, "sparse mul shape mismatch");
        let f = self.field;
        // Column-major view of self.
        let mut cols_of_self: Vec<Vec<(u32, Scalar)>> = vec![Vec::new(); self.cols];
        for &(r, c, v) in &self.entries {
            cols_of_self[c as usize].push((r, v));
        }
        // Group other's entries by column.
        let mut by_col: Vec<Vec<(u32, Scalar)>> = vec![Vec::new(); other.cols];
        for &(r, c, v) in &other.entries {
            by_col[c as usize].push((r, v));
        }
        let mut scratch: Vec<u64> = vec![0; self.rows];
        let mut touched: Vec<u32> = Vec::new();
        let mut t = Vec::new();
        for j in 0..other.cols {
            for &(k, bv) in &by_col[j] {
                for &(i, av) in &cols_of_self[k as usize] {
                    if scratch[i as usize] == 0 {
                        touched.push(i);
                    }
                    scratch[i as usize] = (scratch[i as usize] + av.0 * bv.0) % self.field.modulus();
                }
            }
            touched.sort_unstable();
            for &i in &touched {
                let v = scratch[i as usize];
                if v != 0 {
                    t.push((i, j as u32, Scalar(v)));
                }
                scratch[i as usize] = 0;
            }
            touched.clear();
        }
        SparseMatrix::from_triplets(f, self.rows, other.cols, t)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        let f = self.field;
        let mut out = vec![Scalar::ZERO; self.rows];
        for &(r, c, val) in &self.entries {
            out[r as usize] = f.mul_add(out[r as usize], val, v[c as usize]);
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.rank_with_threshold(DEFAULT_DENSITY_THRESHOLD)
    }

    /// Markowitz-style elimination; hands the live submatrix to the dense
    /// kernel once its density exceeds `threshold`.
    pub fn rank_with_threshold(&self, threshold: f64) -> usize {
        let f = self.field;
        let mut rows: Vec<Option<Vec<(u32, Scalar)>>> = {
            let mut rs: Vec<Vec<(u32, Scalar)>> = vec![Vec::new(); self.rows];
            for &(r, c, v) in &self.entries {
                rs[r as usize].push((c, v));
            }
            rs.into_iter().map(Some).collect()
        };
        let mut col_count: Vec<u32> = vec![0; self.cols];
        let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); self.cols];
        for (r, row) in rows.iter().enumerate() {
            for &(c, _) in row.as_ref().unwrap() {
                col_count[c as usize] += 1;
                col_rows[c as usize].push(r as u32);
            }
        }
        let mut heap: BinaryHeap<Reverse<(usize, u32)>> = rows
            .iter()
            .enumerate()
            .filter(|(_, row)| !row.as_ref().unwrap().is_empty())
            .map(|(r, row)| Reverse((row.as_ref().unwrap().len(), r as u32)))
            .collect();
        let mut alive_rows = rows.iter().filter(|r| !r.as_ref().unwrap().is_empty()).count();
        let mut alive_cols = col_count.iter().filter(|&&c| c > 0).count();
        let mut nnz = self.entries.len();
        let mut pivots = 0usize;

        while let Some(Reverse((len, r))) = heap.pop() {
            let Some(row) = rows[r as usize].as_ref() else { continue };
            if row.len() != len || row.is_empty() {
                continue; // stale heap entry
            }
            // Pivot column: fewest live rows, ties to the smallest index.
            let (pc, pv) = {
                let mut best: Option<(u32, u32, Scalar)> = None;
                for &(c, v) in row {
                    let cnt = col_count[c as usize];
                    if best.map_or(true, |(bc, bcnt, _)| (cnt, c) < (bcnt, bc)) {
                        best = Some((c, cnt, v));
                    }
                }
                let (c, _, v) = best.unwrap();
                (c, v)
            };
            let pivot_row = rows[r as usize].take().unwrap();
            pivots += 1;
            alive_rows -= 1;
            nnz -= pivot_row.len();
            for &(c, _) in &pivot_row {
                col_count[c as usize] -= 1;
                if col_count[c as usize] == 0 {
                    alive_cols -= 1;
                }
            }
            let pinv = f.inv(pv);
            let victims = std::mem::take(&mut col_rows[pc as usize]);
            for r2 in victims {
                if r2 == r {
                    continue;
                }
                let Some(row2) = rows[r2 as usize].as_ref() else { continue };
                let Some(&(_, v2)) = row2.iter().find(|&&(c, _)| c == pc) else {
                    continue; // stale column-index entry
                };
                let factor = f.mul(v2, pinv);
                let row2 = rows[r2 as usize].take().unwrap();
                let merged = row_axpy(f, &row2, &pivot_row, factor, pc);
                nnz -= row2.len();
                nnz += merged.len();
                for &(c, _) in &row2 {
                    col_count[c as usize] -= 1;
                    if col_count[c as usize] == 0 {
                        alive_cols -= 1;
                    }
                }
                for &(c, _) in &merged {
                    if col_count[c as usize] == 0 {
                        alive_cols += 1;
                    }
                    col_count[c as usize] += 1;
                    if c != pc {
                        col_rows[c as usize].push(r2);
                    }
                }
                if merged.is_empty() {
                    alive_rows -= 1;
                    rows[r2 as usize] = Some(Vec::new());
                } else {
                    heap.push(Reverse((merged.len(), r2)));
                    rows[r2 as usize] = Some(merged);
                }
            }
            if alive_rows == 0 || alive_cols == 0 {
                break;
            }
            let density = nnz as f64 / (alive_rows as f64 * alive_cols as f64);
            if density > threshold && alive_rows.min(alive_cols) > 4 {
                let live: Vec<Vec<(u32, Scalar)>> = rows
                    .iter()
                    .filter_map(|r| r.as_ref())
                    .filter(|r| !r.is_empty())
                    .cloned()
                    .collect();
                return pivots + Eliminator::new(f, self.cols).rank_of_rows(live.into_iter());
            }
        }
        pivots
    }

    /// Kernel basis via the dense path; differentials that only need the
    /// kernel dimension should use `cols() - rank()` instead.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        self.to_dense().kernel_basis()
    }

    pub fn solve(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        self.to_dense().solve(v)
    }
}

/// `row - factor * pivot` as sorted sparse vectors; `pc` is the pivot
/// column and is guaranteed to cancel.
fn row_axpy(
    f: PrimeField,
    row: &[(u32, Scalar)],
    pivot: &[(u32, Scalar)],
    factor: Scalar,
    pc: u32,
) -> Vec<(u32, Scalar)> {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let next_row = row.get(i).map(|e| e.0).unwrap_or(u32::MAX);
        let next_piv = pivot.get(j).map(|e| e.0).unwrap_or(u32::MAX);
        if next_row < next_piv {
            out.push(row[i]);
            i += 1;
        } else if next_piv < next_row {
            let v = f.neg(f.mul(factor, pivot[j].1));
            if !v.is_zero() {
                out.push((next_piv, v));
            }
            j += 1;
        } else {
            let v = f.sub(row[i].1, f.mul(factor, pivot[j].1));
            debug_assert!(next_row != pc || v.is_zero());
            if !v.is_zero() {
                out.push((next_row, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incremental row-echelon rank engine shared by the dense path and the
/// sparse fallback. Inserted rows are reduced against the pivot rows seen
/// so far; pivot rows are immutable once stored.
struct Eliminator {
    field: PrimeField,
    cols: usize,
    lazy: bool,
    /// Pivot row for each column, normalised to a leading 1, stored sparse.
    pivot_rows: Vec<Option<Vec<(u32, Scalar)>>>,
    rank: usize,
}

impl Eliminator {
    fn new(field: PrimeField, cols: usize) -> Self {
        Eliminator {
            field,
            cols,
            lazy: field.modulus() < LAZY_MODULUS_BOUND,
            pivot_rows: vec![None; cols],
            rank: 0,
        }
    }

    fn rank_of_rows(mut self, rows: impl Iterator<Item = Vec<(u32, Scalar)>>) -> usize {
        let p = self.field.modulus();
        let mut acc: Vec<u64> = vec![0; self.cols];
        let mut heap: BinaryHeap<Reverse<u32>> = BinaryHeap::new();
        for row in rows {
            if self.rank == self.cols {
                break; // full column rank, nothing more to learn
            }
            for &(c, v) in &row {
                if acc[c as usize] == 0 {
                    heap.push(Reverse(c));
                }
                acc[c as usize] += v.0;
            }
            let mut touched: Vec<u32> = Vec::new();
            while let Some(Reverse(c)) = heap.pop() {
                let raw = acc[c as usize];
                if raw == 0 {
                    continue;
                }
                let lead = raw % p;
                touched.push(c);
                if lead == 0 {
                    acc[c as usize] = 0;
                    continue;
                }
                match &self.pivot_rows[c as usize] {
                    Some(pivot) => {
                        // acc -= lead * pivot   (pivot has a leading 1 at c)
                        let m = p - lead;
                        if self.lazy {
                            for &(pc, pv) in pivot {
                                if acc[pc as usize] == 0 {
                                    heap.push(Reverse(pc));
                                }
                                acc[pc as usize] += m * pv.0;
                            }
                        } else {
                            for &(pc, pv) in pivot {
                                if acc[pc as usize] == 0 {
                                    heap.push(Reverse(pc));
                                }
                                acc[pc as usize] = (acc[pc as usize] + m * pv.0) % p;
                            }
                        }
                        acc[c as usize] = 0;
                    }
                    None => {
                        // New pivot: normalise the remainder of the row.
                        let inv = self.field.inv(Scalar(lead));
                        let mut stored = vec![(c, self.field.one())];
                        acc[c as usize] = 0;
                        let mut rest: Vec<u32> = heap.drain().map(|Reverse(c)| c).collect();
                        rest.sort_unstable();
                        rest.dedup();
                        for c2 in rest {
                            let v = acc[c2 as usize] % p;
                            acc[c2 as usize] = 0;
                            touched.push(c2);
                            if v != 0 {
                                stored.push((c2, self.field.mul(Scalar(v), inv)));
                            }
                        }
                        self.pivot_rows[c as usize] = Some(stored);
                        self.rank += 1;
                        break;
                    }
                }
            }
            // Clear any residue (heap drained or row vanished).
            for c in touched {
                acc[c as usize] = 0;
            }
            for Reverse(c) in heap.drain() {
                acc[c as usize] = 0;
            }
        }
        self.rank
    }
}

/// Stacks blocks into one sparse matrix. `row_dims`/`col_dims` give the
/// block grid; `blocks` lists `(block_row, block_col, matrix)`.
pub fn block_matrix(
    field: PrimeField,
    row_dims: &[usize],
    col_dims: &[usize],
    blocks: &[(usize, usize, &SparseMatrix)],
) -> SparseMatrix {
    let row_off: Vec<usize> = std::iter::once(0)
        .chain(row_dims.iter().scan(0, |s, d| {
            *s += d;
            Some(*s)
        }))
        .collect();
    let col_off: Vec<usize> = std::iter::once(0)
        .chain(col_dims.iter().scan(0, |s, d| {
            *s += d;
            Some(*s)
        }))
        .collect();
    let rows = row_off[row_dims.len()];
    let cols = col_off[col_dims.len()];
    let mut t = Vec::new();
    for &(bi, bj, m) in blocks {
        assert_eq!(m.rows(), row_dims[bi]);
        assert_eq!(m.cols(), col_dims[bj]);
        for &(r, c, v) in m.entries() {
            t.push((r + row_off[bi] as u32, c + col_off[bj] as u32, v));
        }
    }
    SparseMatrix::from_triplets(field, rows, cols, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn f13() -> PrimeField {
        PrimeField::new(13).unwrap()
    }

    fn random_sparse(field: PrimeField, rows: usize, cols: usize, fill: f64, seed: u64) -> SparseMatrix {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut t = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if rng.gen::<f64>() < fill {
                    t.push((r as u32, c as u32, Scalar(rng.gen_range(1..field.modulus()))));
                }
            }
        }
        SparseMatrix::from_triplets(field, rows, cols, t)
    }

    #[test]
    fn identity_rank() {
        assert_eq!(DenseMatrix::identity(f13(), 3).rank(), 3);
        assert_eq!(SparseMatrix::identity(f13(), 3).rank(), 3);
    }

    #[test]
    fn kernel_of_zero_matrix() {
        let z = DenseMatrix::zeros(f13(), 2, 2);
        let k = z.kernel_basis();
        assert_eq!(k.len(), 2);
        let km = DenseMatrix::from_columns(f13(), 2, &k);
        assert_eq!(km.rank(), 2);
    }

    #[test]
    fn solve_scalar_equation() {
        let f = f13();
        let m = DenseMatrix::from_fn(f, 1, 1, |_, _| Scalar(2));
        assert_eq!(m.solve(&[Scalar(1)]).unwrap(), vec![Scalar(7)]);
    }

    #[test]
    fn solve_detects_inconsistency() {
        let f = f13();
        // x + y = 1 and x + y = 2 simultaneously.
        let mut m = DenseMatrix::zeros(f, 2, 2);
        for i in 0..2 {
            for j in 0..2 {
                m.set(i, j, f.one());
            }
        }
        assert!(matches!(m.solve(&[Scalar(1), Scalar(2)]), Err(Error::NoSolution)));
    }

    #[test]
    fn matrix_orders() {
        let f = f13();
        let mut d = DenseMatrix::zeros(f, 2, 2);
        d.set(0, 0, Scalar(3));
        d.set(1, 1, Scalar(1));
        assert_eq!(d.order(100).unwrap(), 3);
        assert_eq!(DenseMatrix::identity(f, 4).order(10).unwrap(), 1);
        let mut e = DenseMatrix::zeros(f, 2, 2);
        e.set(0, 0, Scalar(12));
        e.set(1, 1, Scalar(12));
        assert!(matches!(e.order(1), Err(Error::CapExceeded(1))));
        assert_eq!(e.order(2).unwrap(), 2);
        let z = DenseMatrix::zeros(f, 2, 2);
        assert!(matches!(z.order(5), Err(Error::NotInvertible)));
    }

    #[test]
    fn inverse_round_trip() {
        let f = f13();
        let m = random_sparse(f, 6, 6, 0.7, 5).to_dense();
        if m.rank() == 6 {
            let inv = m.inverse().unwrap();
            assert!(m.mul(&inv).is_identity());
        }
    }

    #[test]
    fn sparse_rank_matches_dense_on_seeded_matrices() {
        let f = f13();
        for seed in 0..12 {
            let m = random_sparse(f, 30, 24, 0.12, seed);
            assert_eq!(m.rank(), m.to_dense().rank(), "seed {seed}");
            assert_eq!(m.rank(), m.transpose().rank(), "transpose, seed {seed}");
        }
    }

    #[test]
    fn large_prime_eliminator_path() {
        let f = PrimeField::new(2147483647).unwrap();
        let m = random_sparse(f, 20, 20, 0.4, 9);
        assert_eq!(m.rank(), m.to_dense().rank());
    }

    #[test]
    fn block_matrix_assembly() {
        let f = f13();
        let a = SparseMatrix::identity(f, 2);
        let b = SparseMatrix::identity(f, 3);
        let m = block_matrix(f, &[2, 3], &[2, 3], &[(0, 0, &a), (1, 1, &b)]);
        assert!(m.is_identity());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn rank_nullity_and_transpose(seed in 0u64..500, rows in 1usize..14, cols in 1usize..14) {
            let f = f13();
            let m = random_sparse(f, rows, cols, 0.3, seed);
            let d = m.to_dense();
            let rank = d.rank();
            prop_assert_eq!(rank, m.rank());
            prop_assert_eq!(rank, d.transpose().rank());
            prop_assert_eq!(rank + d.kernel_basis().len(), cols);
        }

        #[test]
        fn solve_recovers_consistent_systems(seed in 0u64..500, n in 1usize..10) {
            let f = f13();
            let m = random_sparse(f, n, n, 0.5, seed).to_dense();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0xabcdef);
            let x: Vec<Scalar> = (0..n).map(|_| Scalar(rng.gen_range(0..13))).collect();
            let v = m.mul_vec(&x);
            let x2 = m.solve(&v).unwrap();
            prop_assert_eq!(m.mul_vec(&x2), v);
        }

        #[test]
        fn sparse_dense_round_trip(seed in 0u64..500, rows in 1usize..10, cols in 1usize..10) {
            let f = f13();
            let m = random_sparse(f, rows, cols, 0.4, seed);
            prop_assert_eq!(m.to_dense().to_sparse(), m);
        }
    }
}
