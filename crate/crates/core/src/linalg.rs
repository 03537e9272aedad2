//! Exact linear algebra over the rationals.
//!
//! Two engines live here. [`RationalMatrix`] is a dense matrix with
//! fraction-free (Bareiss) rank and determinant plus Gauss–Jordan kernels
//! and solves; it is meant for small systems and as a cross-check.
//! [`Echelon`] is an incremental sparse row-echelon form which the Ext and
//! deformation solvers use, since their systems have thousands of mostly
//! empty columns.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Rational;

/// Dense `rows × cols` matrix of rationals stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(RationalMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Rank by fraction-free elimination: every intermediate entry is a
    /// minor of the input (after clearing denominators row by row).
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<Rational>> = (0..self.rows).map(|i| clear_denominators(self.row(i))).collect();
        bareiss_in_place(&mut a, self.cols).0
    }

    /// Determinant of a square matrix by Bareiss elimination.
    pub fn determinant(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let mut a: Vec<Vec<Rational>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let (rank, sign) = bareiss_in_place(&mut a, self.cols);
        if rank < self.rows {
            return Ok(Rational::zero());
        }
        let last = if self.rows == 0 { Rational::one() } else { a[self.rows - 1][self.cols - 1].clone() };
        Ok(if sign { -last } else { last })
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (RationalMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            for j in 0..self.cols {
                m.data.swap(p * self.cols + j, r * self.cols + j);
            }
            let inv = m.get(r, c).recip();
            for j in 0..self.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..self.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let f = m.get(i, c).clone();
                    for j in 0..self.cols {
                        let v = m.get(i, j) - &f * m.get(r, j);
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let (m, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -m.get(r, f).clone();
                }
                v
            })
            .collect()
    }

    /// One solution of `self · v = rhs`, or `None` when inconsistent.
    pub fn solve(&self, rhs: &[Rational]) -> Result<Option<Vec<Rational>>> {
        if rhs.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} against {} rows",
                rhs.len(),
                self.rows
            )));
        }
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, rhs[i].clone());
        }
        let (m, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut v = vec![Rational::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = m.get(r, self.cols).clone();
        }
        Ok(Some(v))
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect();
        write!(f, "{rows:?}")
    }
}

fn clear_denominators(row: &[Rational]) -> Vec<Rational> {
    let l = row
        .iter()
        .fold(num_bigint::BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
    let l = Rational::from_integer(l);
    row.iter().map(|c| c * &l).collect()
}

/// Bareiss elimination with row pivoting. Returns the rank and whether an
/// odd number of row swaps happened. For a full-rank square input the last
/// diagonal entry is the determinant up to that sign.
fn bareiss_in_place(a: &mut [Vec<Rational>], cols: usize) -> (usize, bool) {
    let rows = a.len();
    let mut prev = Rational::one();
    let mut r = 0;
    let mut swapped = false;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            swapped = !swapped;
        }
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = Rational::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    (r, swapped)
}

/// Sparse vector: strictly increasing indices, no zero entries.
pub type SparseVec = Vec<(usize, Rational)>;

pub fn sparse_from_dense(v: &[Rational]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

pub fn sparse_to_dense(v: &SparseVec, len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (i, c) in v {
        out[*i] = c.clone();
    }
    out
}

/// Incremental row-echelon form of sparse vectors.
///
/// Every stored row has a distinct pivot (its lowest index) with
/// coefficient one. Rows are not back-reduced; [`Echelon::reduce`]
/// eliminates in increasing index order, which suffices for membership
/// and for the tag-coordinate tricks used by the solvers: when vectors are
/// laid out as `(value | tag)` with all tag indices above the value
/// indices, a reduced vector with empty value part records a relation in
/// its tag part.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec> + '_ {
        self.rows.values()
    }

    /// Remainder of `v` after eliminating every pivot of the echelon.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<usize, Rational> = v.iter().cloned().collect();
        let mut cursor = 0;
        loop {
            let next = acc
                .range(cursor..)
                .find(|(k, _)| self.rows.contains_key(k))
                .map(|(k, c)| (*k, c.clone()));
            let Some((k, c)) = next else { break };
            for (j, r) in &self.rows[&k] {
                let e = acc.entry(*j).or_insert_with(Rational::zero);
                *e -= &c * r;
                if e.is_zero() {
                    acc.remove(j);
                }
            }
            cursor = k + 1;
        }
        acc.into_iter().collect()
    }

    /// Adds `v` to the span. Returns the normalized new row, or `None`
    /// when `v` was already in the span.
    pub fn insert(&mut self, v: &SparseVec) -> Option<&SparseVec> {
        let r = self.reduce(v);
        let (p, lead) = r.first().cloned()?;
        let inv = lead.recip();
        let row: SparseVec = r.into_iter().map(|(i, c)| (i, c * &inv)).collect();
        self.rows.insert(p, row);
        self.rows.get(&p)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Fully back-reduces the rows so each pivot column is zero outside
    /// its own row.
    pub fn back_reduce(&mut self) {
        let keys: Vec<usize> = self.rows.keys().rev().copied().collect();
        for k in keys {
            let row = self.rows.remove(&k).expect("present");
            let (head, tail) = row.split_first().expect("nonempty");
            let reduced_tail = self.reduce(&tail.to_vec());
            let mut full = vec![head.clone()];
            full.extend(reduced_tail);
            self.rows.insert(k, full);
        }
    }
}

/// Kernel of the linear map sending the `j`-th basis vector to
/// `columns[j]`, where column entries have indices below `image_len`.
pub fn sparse_kernel(columns: &[SparseVec], image_len: usize) -> Vec<SparseVec> {
    let mut ech = Echelon::new();
    let mut kernel = Vec::new();
    for (j, col) in columns.iter().enumerate() {
        let mut v = col.clone();
        debug_assert!(v.iter().all(|(i, _)| *i < image_len));
        v.push((image_len + j, Rational::one()));
        let r = ech.reduce(&v);
        if let Some((p, _)) = r.first() {
            if *p >= image_len {
                kernel.push(r.iter().map(|(i, c)| (i - image_len, c.clone())).collect());
            }
        }
        ech.insert(&v);
    }
    kernel
}

/// Coefficients `c` with `Σ c_j columns[j] = target`, if any.
pub fn sparse_solve(columns: &[SparseVec], image_len: usize, target: &SparseVec) -> Option<SparseVec> {
    let mut ech = Echelon::new();
    for (j, col) in columns.iter().enumerate() {
        let mut v = col.clone();
        v.push((image_len + j, Rational::one()));
        ech.insert(&v);
    }
    let r = ech.reduce(target);
    if r.first().is_some_and(|(i, _)| *i < image_len) {
        return None;
    }
    // target - Σ c_j (col_j | e_j) = (0 | -c)
    Some(r.into_iter().map(|(i, c)| (i - image_len, -c)).collect())
}
