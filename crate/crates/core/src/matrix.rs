//! Dense matrices over GF(p).
//!
//! Zero-row and zero-column matrices are ordinary values: they model the maps
//! `0 -> F^m` and `F^n -> 0` and take part in direct sums like any other block.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldElem, PrimeField};
use crate::poly::Poly;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Output of [`Matrix::rref`]: `transform * source == reduced`.
#[derive(Debug, Clone)]
pub struct Rref {
    pub reduced: Matrix,
    pub transform: Matrix,
    pub rank: usize,
    /// Pivot column of each nonzero row of `reduced`.
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % field.p();
        }
        m
    }

    pub fn from_fn(
        field: PrimeField,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> u32,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(field.reduce(f(i, j) as u64));
            }
        }
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    /// Builds a matrix from row vectors; entries are reduced mod p. An empty
    /// row list needs `cols` to pin the width, so use [`Matrix::zeros`] for that.
    pub fn from_rows<R: AsRef<[u32]>>(field: PrimeField, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != cols) {
            return Err(Error::DimMismatch("ragged rows".into()));
        }
        Ok(Self::from_fn(field, rows.len(), cols, |i, j| rows[i].as_ref()[j]))
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(field: PrimeField, rows: usize, columns: &[Vec<u32>]) -> Self {
        assert!(columns.iter().all(|c| c.len() == rows));
        Self::from_fn(field, rows, columns.len(), |i, j| columns[j][i])
    }

    pub fn diagonal(field: PrimeField, diag: &[u32]) -> Self {
        let n = diag.len();
        Self::from_fn(field, n, n, |i, j| if i == j { diag[i] } else { 0 })
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn elem(&self, i: usize, j: usize) -> FieldElem {
        self.field.elem(self.get(i, j) as u64)
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u32>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    fn check_field(&self, other: &Matrix) {
        assert_eq!(self.field, other.field, "mixed-field matrix arithmetic");
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        self.check_field(other);
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let f = self.field;
        let p = f.p() as u64;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = ((out.data[idx] as u64 + a * other.get(k, j) as u64) % p) as u32;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len());
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.check_field(other);
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        Matrix::from_fn(f, self.rows, self.cols, |i, j| f.add(self.get(i, j), other.get(i, j)))
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.check_field(other);
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        Matrix::from_fn(f, self.rows, self.cols, |i, j| f.sub(self.get(i, j), other.get(i, j)))
    }

    pub fn scale(&self, c: u32) -> Matrix {
        let f = self.field;
        Matrix::from_fn(f, self.rows, self.cols, |i, j| f.mul(c, self.get(i, j)))
    }

    pub fn neg(&self) -> Matrix {
        self.scale(self.field.neg(1 % self.field.p()))
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Matrix {
        let (r0, c0) = (rows.start, cols.start);
        Matrix::from_fn(self.field, rows.len(), cols.len(), |i, j| self.get(r0 + i, c0 + j))
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, self.rows, idx.len(), |i, j| self.get(i, idx[j]))
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, idx.len(), self.cols, |i, j| self.get(idx[i], j))
    }

    pub fn hstack(field: PrimeField, rows: usize, parts: &[&Matrix]) -> Matrix {
        let cols: usize = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let mut off = 0;
        for m in parts {
            assert_eq!(m.rows, rows);
            for i in 0..rows {
                for j in 0..m.cols {
                    out.set(i, off + j, m.get(i, j));
                }
            }
            off += m.cols;
        }
        out
    }

    pub fn vstack(field: PrimeField, cols: usize, parts: &[&Matrix]) -> Matrix {
        let rows: usize = parts.iter().map(|m| m.rows).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let mut off = 0;
        for m in parts {
            assert_eq!(m.cols, cols);
            for i in 0..m.rows {
                for j in 0..cols {
                    out.set(off + i, j, m.get(i, j));
                }
            }
            off += m.rows;
        }
        out
    }

    /// Block-diagonal direct sum; zero-dimensional blocks shift only one axis.
    pub fn direct_sum(field: PrimeField, blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            assert_eq!(b.field, field);
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Reduced row-echelon form with the accumulated row transformation.
    pub fn rref(&self) -> Rref {
        let f = self.field;
        let (m, n) = (self.rows, self.cols);
        let mut r = self.clone();
        let mut e = Matrix::identity(f, m);
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..n {
            if row == m {
                break;
            }
            let Some(piv) = (row..m).find(|&i| r.get(i, col) != 0) else {
                continue;
            };
            r.swap_rows(row, piv);
            e.swap_rows(row, piv);
            let inv = f.inv(r.get(row, col)).expect("pivot is nonzero");
            r.scale_row(row, inv);
            e.scale_row(row, inv);
            for i in 0..m {
                if i != row {
                    let c = r.get(i, col);
                    if c != 0 {
                        r.axpy_row(i, row, f.neg(c));
                        e.axpy_row(i, row, f.neg(c));
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref {
            reduced: r,
            transform: e,
            rank: row,
            pivots,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn scale_row(&mut self, i: usize, c: u32) {
        for j in 0..self.cols {
            let v = self.field.mul(c, self.get(i, j));
            self.set(i, j, v);
        }
    }

    /// row[dst] += c * row[src]
    fn axpy_row(&mut self, dst: usize, src: usize, c: u32) {
        for j in 0..self.cols {
            let v = self.field.add(self.get(dst, j), self.field.mul(c, self.get(src, j)));
            self.set(dst, j, v);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimMismatch(format!(
                "inverse of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let r = self.rref();
        if r.rank < self.rows {
            return Err(Error::Singular);
        }
        Ok(r.transform)
    }

    /// Columns form a basis of the right null space.
    pub fn kernel_basis(&self) -> Matrix {
        let f = self.field;
        let r = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &r.pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut out = Matrix::zeros(f, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, 1 % f.p());
            for (row, &pc) in r.pivots.iter().enumerate() {
                out.set(pc, k, f.neg(r.reduced.get(row, fc)));
            }
        }
        out
    }

    /// Indices of a maximal set of linearly independent columns (leftmost first).
    pub fn independent_columns(&self) -> Vec<usize> {
        self.rref().pivots
    }

    /// A basis of the column space, as the leftmost independent columns.
    pub fn column_space(&self) -> Matrix {
        self.select_columns(&self.independent_columns())
    }

    /// Solves `self * x = b`, returning one solution if the system is consistent.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows);
        let f = self.field;
        let aug = Matrix::hstack(f, self.rows, &[self, &Matrix::from_columns(f, self.rows, &[b.to_vec()])]);
        let r = aug.rref();
        if r.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (row, &pc) in r.pivots.iter().enumerate() {
            x[pc] = r.reduced.get(row, self.cols);
        }
        Some(x)
    }

    /// Completes independent columns to an invertible square matrix by appending
    /// standard basis vectors.
    pub fn extend_to_basis(&self) -> Matrix {
        let f = self.field;
        let n = self.rows;
        let mut basis = EchelonBasis::new(f, n);
        let mut cols = Vec::with_capacity(n);
        for c in self.columns() {
            let fresh = basis.insert(&c);
            assert!(fresh, "extend_to_basis needs independent columns");
            cols.push(c);
        }
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1 % f.p();
            if basis.insert(&e) {
                cols.push(e);
            }
        }
        Matrix::from_columns(f, n, &cols)
    }

    /// Returns `(r, L, S)` with `L * self * S = I_r (+) 0`.
    pub fn rank_normal_form(&self) -> (usize, Matrix, Matrix) {
        let f = self.field;
        let r = self.rref();
        let rank = r.rank;
        let mut order = r.pivots.clone();
        order.extend((0..self.cols).filter(|c| !r.pivots.contains(c)));
        let perm = Matrix::identity(f, self.cols).select_columns(&order);
        // reduced * perm = [[I, X], [0, 0]]
        let moved = r.reduced.mul(&perm);
        let mut clear = Matrix::identity(f, self.cols);
        for i in 0..rank {
            for j in rank..self.cols {
                clear.set(i, j, f.neg(moved.get(i, j)));
            }
        }
        (rank, r.transform, perm.mul(&clear))
    }

    /// `sum_i coeffs[i] * self^i` by Horner's rule.
    pub fn eval_poly(&self, poly: &Poly) -> Matrix {
        assert!(self.is_square());
        let f = self.field;
        let n = self.rows;
        let mut acc = Matrix::zeros(f, n, n);
        for &c in poly.coeffs().iter().rev() {
            acc = acc.mul(self).add(&Matrix::identity(f, n).scale(c));
        }
        acc
    }

    /// Characteristic polynomial `det(xI - M)` via Hessenberg reduction.
    pub fn char_poly(&self) -> Poly {
        assert!(self.is_square(), "char_poly of a non-square matrix");
        let f = self.field;
        let n = self.rows;
        let mut h = self.clone();
        for m in 1..n.saturating_sub(1) {
            let Some(piv) = (m..n).find(|&i| h.get(i, m - 1) != 0) else {
                continue;
            };
            if piv != m {
                h.swap_rows(piv, m);
                h.swap_cols(piv, m);
            }
            let t = f.inv(h.get(m, m - 1)).expect("nonzero pivot");
            for i in m + 1..n {
                let u = f.mul(h.get(i, m - 1), t);
                if u == 0 {
                    continue;
                }
                // similarity: row_i -= u row_m, col_m += u col_i
                h.axpy_row(i, m, f.neg(u));
                for r in 0..n {
                    let v = f.add(h.get(r, m), f.mul(u, h.get(r, i)));
                    h.set(r, m, v);
                }
            }
        }
        let mut polys: Vec<Poly> = vec![Poly::one(f)];
        for m in 1..=n {
            let lin = Poly::new(f, vec![f.neg(h.get(m - 1, m - 1)), 1]);
            let mut pm = polys[m - 1].mul(&lin);
            let mut t = 1 % f.p();
            for i in (1..m).rev() {
                t = f.mul(t, h.get(i, i - 1));
                let c = f.mul(h.get(i - 1, m - 1), t);
                if c != 0 {
                    pm = pm.sub(&polys[i - 1].scale(c));
                }
            }
            polys.push(pm);
        }
        polys.pop().unwrap()
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{} over {} ", self.rows, self.cols, self.field)?;
        f.debug_list().entries(self.to_rows()).finish()
    }
}

/// Incrementally maintained row-echelon basis, used for span membership tests.
#[derive(Debug, Clone)]
pub struct EchelonBasis {
    field: PrimeField,
    dim: usize,
    rows: Vec<(usize, Vec<u32>)>,
}

impl EchelonBasis {
    pub fn new(field: PrimeField, dim: usize) -> Self {
        EchelonBasis {
            field,
            dim,
            rows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.dim);
        let f = self.field;
        let mut w = v.to_vec();
        for (piv, row) in &self.rows {
            let c = w[*piv];
            if c != 0 {
                for (x, &r) in w.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v` to the span; returns false if it was already there.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let f = self.field;
        let mut w = self.reduce(v);
        let Some(piv) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(w[piv]).unwrap();
        for x in w.iter_mut() {
            *x = f.mul(*x, inv);
        }
        self.rows.push((piv, w));
        true
    }
}
