//! Smith normal form over the integers.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Int;

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct IntMatrix<T: Int> {
    #[serde(with = "crate::decimal::display")]
    rows: usize,
    #[serde(with = "crate::decimal::display")]
    cols: usize,
    #[serde(with = "crate::decimal::seq")]
    entries: Vec<T>,
}

impl<T: Int> IntMatrix<T> {
    pub fn new(rows: usize, cols: usize, entries: Vec<T>) -> Result<Self> {
        if rows * cols != entries.len() {
            return Err(Error::InvalidInput(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        let n = rows.len();
        IntMatrix::new(n, cols, rows.into_iter().flatten().collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    /// Main diagonal, of length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<T> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)].clone())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a.clone() * other[(k, j)].clone();
                    out[(i, j)] = out[(i, j)].clone() + prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in product");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> T {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return T::one();
        }
        let mut m = self.clone();
        let mut sign = T::one();
        let mut prev = T::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return T::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m[(i, j)].clone() * m[(k, k)].clone()
                        - m[(i, k)].clone() * m[(k, j)].clone();
                    m[(i, j)] = num / prev.clone();
                }
            }
            prev = m[(k, k)].clone();
        }
        sign * m[(n - 1, n - 1)].clone()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += factor * row[src]
    fn add_row(&mut self, dst: usize, src: usize, factor: &T) {
        for j in 0..self.cols {
            let delta = self[(src, j)].clone() * factor.clone();
            self[(dst, j)] = self[(dst, j)].clone() + delta;
        }
    }

    /// col[dst] += factor * col[src]
    fn add_col(&mut self, dst: usize, src: usize, factor: &T) {
        for i in 0..self.rows {
            let delta = self[(i, src)].clone() * factor.clone();
            self[(i, dst)] = self[(i, dst)].clone() + delta;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = -self[(i, j)].clone();
        }
    }
}

impl<T: Int> Index<(usize, usize)> for IntMatrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.entries[i * self.cols + j]
    }
}

impl<T: Int> IndexMut<(usize, usize)> for IntMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.entries[i * self.cols + j]
    }
}

impl<T: Int> fmt::Display for IntMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `U * A * V = D` with `U`, `V` unimodular and `D` in Smith form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SmithForm<T: Int> {
    pub u: IntMatrix<T>,
    pub d: IntMatrix<T>,
    pub v: IntMatrix<T>,
}

impl<T: Int> SmithForm<T> {
    pub fn rank(&self) -> usize {
        self.d.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Computes the Smith normal form by repeated pivoting on the entry of
/// smallest absolute value (ties: lowest row, then lowest column).
pub fn smith_normal_form<T: Int>(a: &IntMatrix<T>) -> SmithForm<T> {
    let (rows, cols) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for k in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = smallest_entry(&d, k) else {
                return finish(u, d, v);
            };
            d.swap_rows(k, pi);
            u.swap_rows(k, pi);
            d.swap_cols(k, pj);
            v.swap_cols(k, pj);

            let pivot = d[(k, k)].clone();
            let mut cleared = true;
            for i in k + 1..rows {
                if d[(i, k)].is_zero() {
                    continue;
                }
                let q = -nearest_quotient(&d[(i, k)], &pivot);
                d.add_row(i, k, &q);
                u.add_row(i, k, &q);
                cleared &= d[(i, k)].is_zero();
            }
            for j in k + 1..cols {
                if d[(k, j)].is_zero() {
                    continue;
                }
                let q = -nearest_quotient(&d[(k, j)], &pivot);
                d.add_col(j, k, &q);
                v.add_col(j, k, &q);
                cleared &= d[(k, j)].is_zero();
            }
            if !cleared {
                continue;
            }

            // pivot must divide the rest of the block
            let offender = (k + 1..rows).find(|&i| {
                (k + 1..cols).any(|j| !(d[(i, j)].clone() % pivot.clone()).is_zero())
            });
            match offender {
                Some(i) => {
                    d.add_row(k, i, &T::one());
                    u.add_row(k, i, &T::one());
                }
                None => break,
            }
        }
        if d[(k, k)].is_negative() {
            d.negate_row(k);
            u.negate_row(k);
        }
    }
    finish(u, d, v)
}

/// `x / p` rounded to the nearest integer, so remainders satisfy
/// `|r| <= |p| / 2` and the transforms grow more slowly.
fn nearest_quotient<T: Int>(x: &T, p: &T) -> T {
    let (q, r) = x.div_rem(p);
    let two_r = r.abs() * T::small(2);
    if two_r > p.abs() {
        if r.is_negative() == p.is_negative() {
            q + T::one()
        } else {
            q - T::one()
        }
    } else {
        q
    }
}

fn finish<T: Int>(u: IntMatrix<T>, d: IntMatrix<T>, v: IntMatrix<T>) -> SmithForm<T> {
    SmithForm { u, d, v }
}

fn smallest_entry<T: Int>(d: &IntMatrix<T>, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, T)> = None;
    for i in k..d.rows {
        for j in k..d.cols {
            let x = d[(i, j)].abs();
            if x.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, _, b)| x < *b) {
                best = Some((i, j, x));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Invariant factors of the cokernel `Z^cols / (row span of A)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct InvariantFactors<T: Int> {
    /// Torsion invariant factors, each > 1, in divisibility order.
    #[serde(with = "crate::decimal::seq")]
    pub factors: Vec<T>,
    #[serde(with = "crate::decimal::display")]
    pub free_rank: usize,
}

pub fn invariant_factors<T: Int>(a: &IntMatrix<T>) -> InvariantFactors<T> {
    let snf = smith_normal_form(a);
    let diag = snf.d.diagonal();
    let rank = diag.iter().filter(|x| !x.is_zero()).count();
    InvariantFactors {
        factors: diag
            .into_iter()
            .filter(|x| !x.is_zero() && !x.is_one())
            .collect(),
        free_rank: a.cols - rank,
    }
}

/// A basis of `{v in Z^cols : A v = 0}` read off the trailing columns of `V`.
///
/// Each vector is primitive, and its first nonzero entry is positive.
pub fn kernel_basis<T: Int>(a: &IntMatrix<T>) -> Vec<Vec<T>> {
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    (rank..a.cols)
        .map(|j| {
            let mut col = snf.v.column(j);
            if col.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative) {
                col.iter_mut().for_each(|x| *x = -x.clone());
            }
            col
        })
        .collect()
}
