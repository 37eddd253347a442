//! Dense matrices over a finite field and over the integers.

use std::fmt;

use serde::{Deserialize, Serialize};

use num_rational::Rational64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ffield::{Elem, Field};

/// Row-major matrix over k.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MatK {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl fmt::Debug for MatK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|x| x.0.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl MatK {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatK { rows, cols, data: vec![Elem::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Elem::ONE);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Elem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Invalid("ragged matrix rows".into()));
        }
        Ok(MatK { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// The image of an integer matrix in the prime field.
    pub fn from_matz(f: &Field, m: &MatZ) -> Self {
        let rows = m.to_rows().iter().map(|r| r.iter().map(|&x| f.from_int(x)).collect()).collect();
        Self::from_rows(rows).expect("rectangular")
    }

    /// Builds a matrix from signed integers, reduced into the prime field.
    pub fn from_ints(f: &Field, rows: &[&[i64]]) -> Self {
        let v = rows.iter().map(|r| r.iter().map(|&x| f.from_int(x)).collect()).collect();
        Self::from_rows(v).expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Elem> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, f: &Field, other: &MatK) -> Result<MatK> {
        if self.cols != other.rows {
            return Err(Error::Arity { expected: self.cols, got: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = Elem::ZERO;
                for k in 0..self.cols {
                    acc = f.add(acc, f.mul(self.get(r, k), other.get(k, c)));
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, f: &Field, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.rows, "vector length mismatch");
        (0..self.cols)
            .map(|c| {
                let mut acc = Elem::ZERO;
                for (r, &x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc = f.add(acc, f.mul(x, self.get(r, c)));
                    }
                }
                acc
            })
            .collect()
    }

    /// Sub-matrix of the given column range.
    pub fn columns(&self, start: usize, len: usize) -> MatK {
        let mut out = Self::zeros(self.rows, len);
        for r in 0..self.rows {
            for c in 0..len {
                out.set(r, c, self.get(r, start + c));
            }
        }
        out
    }

    /// Sub-matrix selecting the given columns in order.
    pub fn select_columns(&self, cols: &[usize]) -> MatK {
        let mut out = Self::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(r, j, self.get(r, c));
            }
        }
        out
    }

    /// Block-diagonal matrix with the given square blocks.
    pub fn block_diag(blocks: &[MatK]) -> MatK {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out.set(r0 + r, c0 + c, b.get(r, c));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Gaussian elimination: returns the inverse, or `None` when singular.
    pub fn inverse(&self, f: &Field) -> Option<MatK> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let pinv = f.inv(a.get(col, col));
            a.scale_row(f, col, pinv);
            inv.scale_row(f, col, pinv);
            for r in 0..n {
                if r != col {
                    let factor = a.get(r, col);
                    if !factor.is_zero() {
                        a.add_row_multiple(f, r, col, f.neg(factor));
                        inv.add_row_multiple(f, r, col, f.neg(factor));
                    }
                }
            }
        }
        Some(inv)
    }

    pub fn det(&self, f: &Field) -> Elem {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Elem::ONE;
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return Elem::ZERO;
            };
            if pivot != col {
                a.swap_rows(col, pivot);
                det = f.neg(det);
            }
            let pv = a.get(col, col);
            det = f.mul(det, pv);
            let pinv = f.inv(pv);
            for r in col + 1..n {
                let factor = f.mul(a.get(r, col), pinv);
                if !factor.is_zero() {
                    a.add_row_multiple(f, r, col, f.neg(factor));
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn scale_row(&mut self, f: &Field, r: usize, s: Elem) {
        for c in 0..self.cols {
            let v = f.mul(self.get(r, c), s);
            self.set(r, c, v);
        }
    }

    fn add_row_multiple(&mut self, f: &Field, dst: usize, src: usize, s: Elem) {
        for c in 0..self.cols {
            let v = f.add(self.get(dst, c), f.mul(self.get(src, c), s));
            self.set(dst, c, v);
        }
    }

    /// The 2×2 minor [i j] of a matrix with two rows.
    pub fn bracket(&self, f: &Field, i: usize, j: usize) -> Elem {
        assert_eq!(self.rows, 2, "brackets are defined for 2-row matrices");
        f.sub(f.mul(self.get(0, i), self.get(1, j)), f.mul(self.get(1, i), self.get(0, j)))
    }
}

/// Row-major integer matrix (monomial exponents, permutation matrices).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MatZ {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl fmt::Debug for MatZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl MatZ {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatZ { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix rows");
        MatZ { rows: r, cols: c, data: rows.iter().flat_map(|x| x.iter().copied()).collect() }
    }

    pub fn from_vecs(rows: Vec<Vec<i64>>) -> Self {
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        Self::from_rows(&refs)
    }

    /// P_σ = (e_{σ(1)}, …, e_{σ(n)}): column j is e_{σ(j)} (0-based images).
    pub fn permutation(sigma: &[usize]) -> Self {
        let n = sigma.len();
        let mut m = Self::zeros(n, n);
        for (j, &s) in sigma.iter().enumerate() {
            m.set(s, j, 1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &MatZ) -> MatZ {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    out.data[r * other.cols + c] += a * other.get(k, c);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &MatZ) -> MatZ {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch");
        MatZ {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn block_diag(blocks: &[MatZ]) -> MatZ {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out.set(r0 + r, c0 + c, b.get(r, c));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn sub(&self, other: &MatZ) -> MatZ {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> MatZ {
        MatZ { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| a * k).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&a| a == 0)
    }

    /// Column c as a vector.
    pub fn column(&self, c: usize) -> Vec<i64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    /// The inverse over Z, if the matrix is unimodular.
    pub fn inverse(&self) -> Option<MatZ> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a: Vec<Vec<Rational64>> = (0..n)
            .map(|r| {
                let mut row: Vec<Rational64> = self.row(r).iter().map(|&x| Rational64::from_integer(x)).collect();
                row.extend((0..n).map(|c| Rational64::from_integer(i64::from(c == r))));
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, piv);
            let inv = a[col][col].recip();
            for x in a[col].iter_mut() {
                *x *= inv;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let k = a[r][col];
                    let pivot_row = a[col].clone();
                    for (x, p) in a[r].iter_mut().zip(pivot_row) {
                        *x -= k * p;
                    }
                }
            }
        }
        let mut out = Self::zeros(n, n);
        for (r, row) in a.iter().enumerate() {
            for c in 0..n {
                let v = row[n + c];
                if !v.is_integer() {
                    return None;
                }
                out.set(r, c, v.to_integer());
            }
        }
        Some(out)
    }

    /// Places `block` with its top-left corner at (r0, c0).
    pub fn put(&mut self, r0: usize, c0: usize, block: &MatZ) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c));
            }
        }
    }
}
