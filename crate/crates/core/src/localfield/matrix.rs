//! Dense matrices with [`LocalElement`] entries.

use std::fmt;

use super::element::LocalElement;
use super::gf::Gf;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    gf: &'static Gf,
    rows: usize,
    cols: usize,
    data: Vec<LocalElement>,
}

impl Matrix {
    pub fn zeros(gf: &'static Gf, rows: usize, cols: usize) -> Self {
        Matrix {
            gf,
            rows,
            cols,
            data: vec![LocalElement::zero(gf); rows * cols],
        }
    }

    pub fn identity(gf: &'static Gf, n: usize) -> Self {
        Self::scalar(gf, n, &LocalElement::one(gf))
    }

    pub fn scalar(gf: &'static Gf, n: usize, c: &LocalElement) -> Self {
        let mut m = Self::zeros(gf, n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn diagonal(gf: &'static Gf, entries: &[LocalElement]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(gf, n, n);
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn from_rows(gf: &'static Gf, rows: Vec<Vec<LocalElement>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        let data: Vec<LocalElement> = rows.into_iter().flatten().collect();
        if data.iter().any(|e| e.field() != gf) {
            return Err(Error::WrongField("matrix entries over mixed fields".into()));
        }
        Ok(Matrix {
            gf,
            rows: r,
            cols: c,
            data,
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(gf: &'static Gf, n: usize, cols: &[Vec<LocalElement>]) -> Self {
        let mut m = Self::zeros(gf, n, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, e) in col.iter().enumerate() {
                m.set(i, j, e.clone());
            }
        }
        m
    }

    pub fn field(&self) -> &'static Gf {
        self.gf
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &LocalElement {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: LocalElement) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<LocalElement> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<LocalElement>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row(&self, i: usize) -> Vec<LocalElement> {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[LocalElement] {
        &self.data
    }

    pub fn map(&self, f: impl Fn(&LocalElement) -> LocalElement) -> Self {
        Matrix {
            gf: self.gf,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map(&self, f: impl Fn(&LocalElement) -> Result<LocalElement>) -> Result<Self> {
        let data = self.data.iter().map(f).collect::<Result<Vec<_>>>()?;
        let gf = data.first().map_or(self.gf, |e| e.field());
        Ok(Matrix {
            gf,
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Entry-wise Galois conjugation.
    pub fn sigma(&self) -> Result<Self> {
        self.try_map(|e| e.sigma())
    }

    pub fn to_quadratic(&self) -> Self {
        let gf = self.gf.quadratic();
        Matrix {
            gf,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|e| e.to_quadratic()).collect(),
        }
    }

    pub fn to_base(&self) -> Result<Self> {
        self.try_map(|e| e.to_base())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.gf, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() && a.is_exact() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() && b.is_exact() {
                        continue;
                    }
                    let v = out.get(i, j) + &(a * b);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[LocalElement]) -> Vec<LocalElement> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = LocalElement::zero(self.gf);
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = &acc + &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Matrix {
            gf: self.gf,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Matrix {
            gf: self.gf,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, c: &LocalElement) -> Matrix {
        self.map(|e| e * c)
    }

    pub fn pow(&self, e: u32) -> Matrix {
        let mut acc = Matrix::identity(self.gf, self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.gf, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Block matrix `[[a, b], [c, d]]`.
    pub fn block(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Matrix {
        let (n, m) = (a.rows, a.cols);
        let mut out = Matrix::zeros(a.gf, n + c.rows, m + b.cols);
        for i in 0..out.rows {
            for j in 0..out.cols {
                let src = match (i < n, j < m) {
                    (true, true) => a.get(i, j),
                    (true, false) => b.get(i, j - m),
                    (false, true) => c.get(i - n, j),
                    (false, false) => d.get(i - n, j - m),
                };
                out.set(i, j, src.clone());
            }
        }
        out
    }

    /// Sub-block of rows `r0..r1` and columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        let mut out = Matrix::zeros(self.gf, r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                out.set(i - r0, j - c0, self.get(i, j).clone());
            }
        }
        out
    }

    /// Characteristic polynomial `det(T - A)`, constant term first, by the
    /// division-free Berkowitz recursion.
    pub fn charpoly(&self) -> Vec<LocalElement> {
        assert!(self.is_square());
        let n = self.rows;
        let gf = self.gf;
        let one = LocalElement::one(gf);
        if n == 0 {
            return vec![one];
        }
        // coefficient vectors are kept highest degree first
        let mut vect = vec![one.clone(), -self.get(0, 0)];
        for r in 1..n {
            let a = self.get(r, r).clone();
            let row: Vec<LocalElement> = (0..r).map(|j| self.get(r, j).clone()).collect();
            let mut col: Vec<LocalElement> = (0..r).map(|i| self.get(i, r).clone()).collect();
            let mut t = vec![one.clone(), -&a];
            for _ in 0..r {
                let rc = row
                    .iter()
                    .zip(&col)
                    .fold(LocalElement::zero(gf), |acc, (x, y)| &acc + &(x * y));
                t.push(-&rc);
                // col <- A_sub * col
                col = (0..r)
                    .map(|i| {
                        (0..r).fold(LocalElement::zero(gf), |acc, k| {
                            &acc + &(self.get(i, k) * &col[k])
                        })
                    })
                    .collect();
            }
            let mut next = vec![LocalElement::zero(gf); r + 2];
            for (i, slot) in next.iter_mut().enumerate() {
                for (j, v) in vect.iter().enumerate() {
                    if i >= j {
                        *slot = &*slot + &(&t[i - j] * v);
                    }
                }
            }
            vect = next;
        }
        vect.reverse();
        vect
    }

    pub fn det(&self) -> LocalElement {
        let cp = self.charpoly();
        let c0 = cp[0].clone();
        if self.rows % 2 == 1 {
            -c0
        } else {
            c0
        }
    }

    /// Inverse by Gauss-Jordan elimination with minimal-valuation pivots.
    /// Non-monomial pivots are inverted to `rel_prec` significant digits.
    pub fn inverse(&self, rel_prec: i64) -> Result<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(self.gf, n);
        for c in 0..n {
            let piv = (c..n)
                .filter(|&r| !a.get(r, c).is_zero())
                .min_by_key(|&r| a.get(r, c).valuation_or_bound())
                .ok_or(Error::RankDeficient)?;
            a.swap_rows(c, piv);
            inv.swap_rows(c, piv);
            let p = a.get(c, c).inv(rel_prec)?;
            for j in 0..n {
                a.set(c, j, a.get(c, j) * &p);
                inv.set(c, j, inv.get(c, j) * &p);
            }
            for r in 0..n {
                if r == c {
                    continue;
                }
                let f = a.get(r, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    a.set(r, j, a.get(r, j) - &(&f * a.get(c, j)));
                    inv.set(r, j, inv.get(r, j) - &(&f * inv.get(c, j)));
                }
            }
        }
        Ok(inv)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Whether all entries lie in the valuation ring.
    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|e| e.is_integral())
    }

    /// Minimal valuation among the nonzero entries.
    pub fn min_valuation(&self) -> Option<i64> {
        self.data
            .iter()
            .filter(|e| !e.is_zero())
            .map(|e| e.valuation_or_bound())
            .min()
    }

    pub fn is_exact(&self) -> bool {
        self.data.iter().all(|e| e.is_exact())
    }

    /// Drops all terms at exponent `>= n`, keeping entries exact.
    pub fn drop_from(&self, n: i64) -> Matrix {
        self.map(|e| e.drop_from(n))
    }

    pub fn truncate(&self, n: i64) -> Matrix {
        self.map(|e| e.truncate(n))
    }

    /// Rows of display strings, for serialization.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}
