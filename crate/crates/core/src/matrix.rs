//! Matrices with polynomial entries.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::RationalMatrix;
use crate::poly::{Polynomial, Rational, Vars};

/// A `rows × cols` matrix over `ℚ[vars]`, stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    vars: Vars,
    rows: usize,
    cols: usize,
    data: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn zeros(vars: &Vars, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            vars: vars.clone(),
            rows,
            cols,
            data: vec![Polynomial::zero(vars); rows * cols],
        }
    }

    pub fn identity(vars: &Vars, n: usize) -> Self {
        Self::scalar(vars, n, &Polynomial::one(vars))
    }

    /// `p · 1_n`.
    pub fn scalar(vars: &Vars, n: usize, p: &Polynomial) -> Self {
        let mut m = Self::zeros(vars, n, n);
        for i in 0..n {
            m.set(i, i, p.clone());
        }
        m
    }

    pub fn from_rows(vars: &Vars, rows: Vec<Vec<Polynomial>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|row| row.len() != c) {
            return Err(Error::DimensionMismatch(format!(
                "row {} has {} entries, expected {c}",
                bad + 1,
                rows[bad].len()
            )));
        }
        for p in rows.iter().flatten() {
            vars.same(p.vars())?;
        }
        Ok(PolyMatrix {
            vars: vars.clone(),
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Parses a matrix given as rows of polynomial expressions.
    pub fn parse(vars: &Vars, rows: &[&[&str]]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|s| Polynomial::parse(s, vars)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(vars, rows)
    }

    pub fn from_rational(vars: &Vars, m: &RationalMatrix) -> Self {
        let mut out = Self::zeros(vars, m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.set(i, j, Polynomial::constant(vars, m.get(i, j).clone()));
            }
        }
        out
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
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

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) {
        debug_assert!(p.vars() == &self.vars);
        self.data[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.data
    }

    pub fn row_vec(&self, i: usize) -> Vec<Polynomial> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column_vec(&self, j: usize) -> Vec<Polynomial> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Polynomial>> {
        (0..self.rows).map(|i| self.row_vec(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Polynomial::is_zero)
    }

    pub fn map<F: Fn(&Polynomial) -> Polynomial>(&self, f: F) -> Self {
        PolyMatrix {
            vars: self.vars.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    fn check_same_shape(&self, other: &PolyMatrix, what: &str) -> Result<()> {
        self.vars.same(&other.vars)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{what}: {}x{} against {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &PolyMatrix) -> Result<Self> {
        self.check_same_shape(other, "sum")?;
        Ok(PolyMatrix {
            vars: self.vars.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &PolyMatrix) -> Result<Self> {
        self.check_same_shape(other, "difference")?;
        Ok(PolyMatrix {
            vars: self.vars.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn neg(&self) -> Self {
        self.map(|p| -p)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|p| p.scale(c))
    }

    pub fn scale_poly(&self, q: &Polynomial) -> Self {
        self.map(|p| p * q)
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<Self> {
        self.vars.same(&other.vars)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "product: {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(&self.vars, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.vars, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Kronecker product; entry `(i·r' + k, j·c' + l)` is `a_ij · b_kl`.
    pub fn kron(&self, other: &PolyMatrix) -> Result<Self> {
        self.vars.same(&other.vars)?;
        let mut out = Self::zeros(&self.vars, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, a * other.get(k, l));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Assembles `[[a, b], [c, d]]`.
    pub fn block(a: &PolyMatrix, b: &PolyMatrix, c: &PolyMatrix, d: &PolyMatrix) -> Result<Self> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::DimensionMismatch("incompatible block shapes".into()));
        }
        for m in [b, c, d] {
            a.vars.same(&m.vars)?;
        }
        let mut out = Self::zeros(&a.vars, a.rows + c.rows, a.cols + b.cols);
        out.paste(0, 0, a);
        out.paste(0, a.cols, b);
        out.paste(a.rows, 0, c);
        out.paste(a.rows, a.cols, d);
        Ok(out)
    }

    pub fn block_diag(a: &PolyMatrix, d: &PolyMatrix) -> Result<Self> {
        let b = Self::zeros(&a.vars, a.rows, d.cols);
        let c = Self::zeros(&a.vars, d.rows, a.cols);
        Self::block(a, &b, &c, d)
    }

    /// Writes `m` into `self` with its top-left corner at `(r, c)`.
    pub fn paste(&mut self, r: usize, c: usize, m: &PolyMatrix) {
        for i in 0..m.rows {
            for j in 0..m.cols {
                self.set(r + i, c + j, m.get(i, j).clone());
            }
        }
    }

    pub fn submatrix(&self, r0: usize, rows: usize, c0: usize, cols: usize) -> Self {
        let mut out = Self::zeros(&self.vars, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        out
    }

    /// Constant parts of the entries.
    pub fn eval_origin(&self) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).constant_term());
            }
        }
        m
    }

    /// Largest total degree of an entry; 0 for the zero matrix.
    pub fn max_degree(&self) -> u32 {
        self.data.iter().filter_map(Polynomial::degree).max().unwrap_or(0)
    }

    pub fn truncate(&self, degree: u32) -> Self {
        self.map(|p| p.truncate(degree))
    }

    pub fn embed(&self, target: &Vars) -> Result<Self> {
        Ok(PolyMatrix {
            vars: target.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|p| p.embed(target)).collect::<Result<_>>()?,
        })
    }

    pub fn rename(&self, target: &Vars) -> Result<Self> {
        Ok(PolyMatrix {
            vars: target.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|p| p.rename(target)).collect::<Result<_>>()?,
        })
    }

    pub fn negate_variable(&self, i: usize) -> Self {
        self.map(|p| p.negate_variable(i))
    }

    /// Determinant by fraction-free (Bareiss) elimination with exact
    /// polynomial division.
    pub fn determinant(&self) -> Result<Polynomial> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.to_rows();
        let mut prev = Polynomial::one(&self.vars);
        let mut negate = false;
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
                return Ok(Polynomial::zero(&self.vars));
            };
            if p != c {
                a.swap(p, c);
                negate = !negate;
            }
            for i in c + 1..n {
                for j in c + 1..n {
                    let num = &(&a[c][c] * &a[i][j]) - &(&a[i][c] * &a[c][j]);
                    a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
                }
                a[i][c] = Polynomial::zero(&self.vars);
            }
            prev = a[c][c].clone();
        }
        let det = if n == 0 { Polynomial::one(&self.vars) } else { a[n - 1][n - 1].clone() };
        Ok(if negate { -det } else { det })
    }

    /// Inverse in the power series ring, correct up to total degree
    /// `degree`. Requires an invertible constant part.
    pub fn inverse_truncated(&self, degree: u32) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let c0 = self.eval_origin();
        let inv0 = inverse_rational(&c0)
            .ok_or_else(|| Error::NotInvertible("constant part is singular".into()))?;
        let inv0 = PolyMatrix::from_rational(&self.vars, &inv0);
        // A = A0 (1 + N) with N = A0⁻¹ (A − A0); A⁻¹ = Σ (−N)^k A0⁻¹
        let a0 = PolyMatrix::from_rational(&self.vars, &c0);
        let neg_n = inv0.mul(&self.sub(&a0)?)?.neg();
        let mut acc = PolyMatrix::identity(&self.vars, n);
        let mut power = PolyMatrix::identity(&self.vars, n);
        for _ in 0..degree {
            power = power.mul(&neg_n)?.truncate(degree);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power)?;
        }
        acc.mul(&inv0).map(|m| m.truncate(degree))
    }

    /// Exact polynomial inverse, or `None` when the inverse is not a
    /// polynomial matrix (non-constant determinant). The inverse is the
    /// adjugate over the determinant, so its degree is bounded by
    /// `(n − 1) · max_degree`; the truncated series inverse at that degree is
    /// checked by multiplication.
    pub fn inverse_exact(&self) -> Result<Option<Self>> {
        let det = self.determinant()?;
        if det.is_zero() || !det.is_constant() {
            if det.constant_term().is_zero() {
                return Err(Error::NotInvertible("determinant vanishes at the origin".into()));
            }
            return Ok(None);
        }
        let bound = (self.rows.saturating_sub(1) as u32) * self.max_degree();
        let inv = self.inverse_truncated(bound)?;
        let check = self.mul(&inv)?;
        debug_assert!(check == PolyMatrix::identity(&self.vars, self.rows));
        if check != PolyMatrix::identity(&self.vars, self.rows) {
            return Ok(None);
        }
        Ok(Some(inv))
    }
}

fn inverse_rational(m: &RationalMatrix) -> Option<RationalMatrix> {
    let n = m.rows();
    if m.determinant().ok()?.is_zero() {
        return None;
    }
    let mut out = RationalMatrix::zeros(n, n);
    for j in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[j] = Rational::from_integer(1.into());
        let col = m.solve(&e).ok()??;
        for (i, v) in col.into_iter().enumerate() {
            out.set(i, j, v);
        }
    }
    Some(out)
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyMatrix({self})")
    }
}
