//! Coefficient coordinates for linear maps between tuples of polynomial
//! matrices, shared by the structure search and the Ext solver.

use std::collections::HashMap;

use num_traits::One;

use crate::linalg::SparseVec;
use crate::matrix::PolyMatrix;
use crate::poly::{Monomial, Polynomial, Rational, Vars};

/// One scalar unknown: the coefficient of `mono` in entry `(row, col)` of
/// matrix number `block`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Unknown {
    pub block: usize,
    pub row: usize,
    pub col: usize,
    pub mono: Monomial,
}

/// Unknowns for every entry of every shape and every monomial in `monos`,
/// listed monomial-major so that the order of `monos` is the coarse order.
pub(crate) fn enumerate_unknowns(shapes: &[(usize, usize)], monos: &[Monomial], allowed: &[bool]) -> Vec<Unknown> {
    let mut out = Vec::new();
    for m in monos {
        for (block, &(rows, cols)) in shapes.iter().enumerate() {
            if !allowed[block] {
                continue;
            }
            for row in 0..rows {
                for col in 0..cols {
                    out.push(Unknown {
                        block,
                        row,
                        col,
                        mono: m.clone(),
                    });
                }
            }
        }
    }
    out
}

/// The tuple of matrices with a single one at the given unknown.
pub(crate) fn unit_matrices(vars: &Vars, shapes: &[(usize, usize)], u: &Unknown) -> Vec<PolyMatrix> {
    shapes
        .iter()
        .enumerate()
        .map(|(b, &(r, c))| {
            let mut m = PolyMatrix::zeros(vars, r, c);
            if b == u.block {
                m.set(u.row, u.col, Polynomial::monomial(vars, u.mono.clone(), Rational::one()));
            }
            m
        })
        .collect()
}

/// Rebuilds matrices from coordinates over `unknowns`.
pub(crate) fn assemble(vars: &Vars, shapes: &[(usize, usize)], unknowns: &[Unknown], v: &SparseVec) -> Vec<PolyMatrix> {
    let mut entries: Vec<Vec<Polynomial>> = shapes
        .iter()
        .map(|&(r, c)| vec![Polynomial::zero(vars); r * c])
        .collect();
    for (k, c) in v {
        let u = &unknowns[*k];
        let cols = shapes[u.block].1;
        entries[u.block][u.row * cols + u.col].add_term(u.mono.clone(), c.clone());
    }
    shapes
        .iter()
        .zip(entries)
        .map(|(&(r, c), e)| {
            let rows = e.chunks(c.max(1)).map(|ch| ch.to_vec()).take(r).collect();
            if c == 0 {
                PolyMatrix::zeros(vars, r, 0)
            } else {
                PolyMatrix::from_rows(vars, rows).expect("shape")
            }
        })
        .collect()
}

/// Assigns consecutive indices to `(cell, monomial)` pairs of output
/// matrices as they are first seen.
#[derive(Default)]
pub(crate) struct CoordIndex {
    map: HashMap<(usize, Monomial), usize>,
}

impl CoordIndex {
    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn encode(&mut self, mats: &[PolyMatrix]) -> SparseVec {
        let mut out: SparseVec = Vec::new();
        let mut cell = 0;
        for m in mats {
            for p in m.entries() {
                for (mono, c) in p.terms() {
                    let next = self.map.len();
                    let idx = *self.map.entry((cell, mono.clone())).or_insert(next);
                    out.push((idx, c.clone()));
                }
                cell += 1;
            }
        }
        out.sort_by_key(|(i, _)| *i);
        out
    }
}
