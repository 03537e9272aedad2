//! Brute-force adjoint eigenspaces of truncated Ext, and the structured
//! tangent and obstruction dimensions, from dense elimination over unit
//! morphisms. The values it confirms are frozen at the bottom.

use std::collections::BTreeMap;
use std::sync::Arc;

use mfkit::bilinear::{adjoint, classify_brieskorn, rank_one_quadratic, BilinearStructure, Sign, StructureKind};
use mfkit::deform::tangent_dims_structured;
use mfkit::homotopy::{differential, ext_adjoint_split, ExtOptions};
use mfkit::mf::mf_xy;
use mfkit::poly::tjurina;
use mfkit::{Budget, Monomial, MorphismPair, Parity, PolyMatrix, Polynomial, Rational};
use num_traits::{One, Zero};

type Key = (usize, usize, Monomial);
type Vector = BTreeMap<Key, Rational>;

fn vector(m: &MorphismPair) -> Vector {
    let b = m.to_block();
    let mut out = Vector::new();
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            for (mono, c) in b.get(i, j).terms() {
                out.insert((i, j, mono.clone()), c.clone());
            }
        }
    }
    out
}

fn combine(vs: &[Vector], coeffs: &[Rational]) -> Vector {
    let mut out = Vector::new();
    for (v, c) in vs.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (k, x) in v {
            let e = out.entry(k.clone()).or_insert_with(Rational::zero);
            *e += x * c;
        }
    }
    out.retain(|_, x| !x.is_zero());
    out
}

/// Row echelon form in place; returns pivot columns.
fn echelon(rows: &mut [Vec<Rational>]) -> Vec<usize> {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for k in c..cols {
            rows[r][k] = &rows[r][k] * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for k in c..cols {
                    let v = &rows[r][k] * &f;
                    rows[i][k] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn rank(vs: &[Vector]) -> usize {
    let keys: Vec<&Key> = {
        let mut k: Vec<&Key> = vs.iter().flat_map(|v| v.keys()).collect();
        k.sort();
        k.dedup();
        k
    };
    let mut rows: Vec<Vec<Rational>> = vs
        .iter()
        .map(|v| keys.iter().map(|k| v.get(*k).cloned().unwrap_or_else(Rational::zero)).collect())
        .collect();
    echelon(&mut rows).len()
}

/// Coefficient vectors `c` with `Σ cᵢ vᵢ = 0`, restricted to the keys
/// accepted by `keep`.
fn kernel(vs: &[Vector], keep: impl Fn(&Key) -> bool) -> Vec<Vec<Rational>> {
    let mut keys: Vec<&Key> = vs.iter().flat_map(|v| v.keys()).filter(|k| keep(k)).collect();
    keys.sort();
    keys.dedup();
    let n = vs.len();
    let mut rows: Vec<Vec<Rational>> = keys
        .iter()
        .map(|k| vs.iter().map(|v| v.get(*k).cloned().unwrap_or_else(Rational::zero)).collect())
        .collect();
    let pivots = echelon(&mut rows);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut k = vec![Rational::zero(); n];
            k[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                k[p] = -rows[r][f].clone();
            }
            k
        })
        .collect()
}

fn units(m: &Arc<mfkit::MatrixFactorization>, parity: Parity, d: u32) -> Vec<MorphismPair> {
    let v = m.vars();
    let r = m.rank();
    let mut out = Vec::new();
    for mono in Monomial::all_up_to_degree(v.len(), d) {
        for s_block in [true, false] {
            for i in 0..r {
                for j in 0..r {
                    let mut s = PolyMatrix::zeros(v, r, r);
                    let mut t = PolyMatrix::zeros(v, r, r);
                    let e = Polynomial::monomial(v, mono.clone(), Rational::one());
                    if s_block {
                        s.set(i, j, e);
                    } else {
                        t.set(i, j, e);
                    }
                    out.push(MorphismPair::new(m.clone(), m.clone(), parity, s, t).unwrap());
                }
            }
        }
    }
    out
}

struct Oracle {
    b: BilinearStructure,
}

impl Oracle {
    fn adj(&self, v: &Vector, parity: Parity) -> Vector {
        let m = self.b.host();
        let mut block = PolyMatrix::zeros(m.vars(), 2 * m.rank(), 2 * m.rank());
        let mut entries: BTreeMap<(usize, usize), Polynomial> = BTreeMap::new();
        for ((i, j, mono), c) in v {
            let e = entries.entry((*i, *j)).or_insert_with(|| Polynomial::zero(m.vars()));
            *e = &*e + &Polynomial::monomial(m.vars(), mono.clone(), c.clone());
        }
        for ((i, j), p) in entries {
            block.set(i, j, p);
        }
        let f = MorphismPair::from_block(m.clone(), m.clone(), parity, &block).unwrap();
        vector(&adjoint(&f, &self.b, &self.b).unwrap())
    }

    fn project(&self, vs: &[Vector], parity: Parity, sign: i64) -> Vec<Vector> {
        let half = Rational::new(1.into(), 2.into());
        let s = Rational::from_integer(sign.into()) * &half;
        vs.iter()
            .map(|v| combine(&[v.clone(), self.adj(v, parity)], &[half.clone(), s.clone()]))
            .collect()
    }

    /// Cocycles of the given parity with entries of degree ≤ d.
    fn cocycles(&self, parity: Parity, d: u32) -> Vec<Vector> {
        let us = units(self.b.host(), parity, d);
        let images: Vec<Vector> = us.iter().map(|u| vector(&differential(u).unwrap())).collect();
        let basis: Vec<Vector> = us.iter().map(vector).collect();
        kernel(&images, |_| true).iter().map(|k| combine(&basis, k)).collect()
    }

    /// Coboundaries of the given parity with entries of degree ≤ d.
    fn coboundaries(&self, parity: Parity, d: u32, slack: u32) -> Vec<Vector> {
        let us = units(self.b.host(), parity.flip(), d + slack);
        let images: Vec<Vector> = us.iter().map(|u| vector(&differential(u).unwrap())).collect();
        kernel(&images, |k| k.2.degree() > d).iter().map(|k| combine(&images, k)).collect()
    }

    /// `(plus, minus)` dimensions of truncated Ext of the given parity.
    fn split(&self, parity: Parity, d: u32, slack: u32) -> (usize, usize) {
        let z = self.cocycles(parity, d);
        let b = self.coboundaries(parity, d, slack);
        let dim = |sign| rank(&self.project(&z, parity, sign)) - rank(&self.project(&b, parity, sign));
        (dim(1), dim(-1))
    }

    /// Structured tangent and obstruction dimensions.
    fn structured(&self, d: u32, slack: u32) -> (usize, usize) {
        let m = self.b.host();
        let (sigma1, sigma0) = match self.b.kind() {
            StructureKind::Untwisted => (-1, 1),
            StructureKind::Twisted => (1, -1),
        };
        let (ring, _) = tjurina(m.potential()).unwrap();
        let id = MorphismPair::identity(m.clone());
        let hs: Vec<Vector> = ring
            .monomial_basis()
            .unwrap()
            .iter()
            .map(|e| vector(&id.scale_poly(&Polynomial::monomial(m.vars(), e.clone(), Rational::one()))))
            .collect();
        let b0 = self.coboundaries(Parity::Even, d, slack);
        let with = |extra: &[Vector], sign: Option<i64>| {
            let mut all = b0.clone();
            all.extend_from_slice(extra);
            match sign {
                Some(s) => rank(&self.project(&all, Parity::Even, s)),
                None => rank(&all),
            }
        };
        let ideal = hs.len() - (with(&hs, None) - with(&[], None));
        let ext1 = self.split(Parity::Odd, d, slack);
        let ext0 = self.split(Parity::Even, d, slack);
        let tangent = if sigma1 == 1 { ext1.0 } else { ext1.1 } + ideal;
        let signed0 = if sigma0 == 1 { ext0.0 } else { ext0.1 };
        let image = with(&hs, Some(sigma0)) - with(&[], Some(sigma0));
        (tangent, signed0 - image)
    }
}

fn node_pair() -> BilinearStructure {
    let m = Arc::new(mf_xy(1, 1).unwrap());
    let id = PolyMatrix::identity(m.vars(), 2);
    BilinearStructure::new(m, StructureKind::Untwisted, Sign::Plus, id.clone(), id.neg()).unwrap()
}

fn check(b: BilinearStructure) -> ((usize, usize), (usize, usize), usize, usize) {
    let opts = ExtOptions::default();
    let (e, split) = ext_adjoint_split(&b, &opts, &Budget::unlimited()).unwrap();
    assert!(split.stabilized);
    let d = e.truncation_degree.max(3);
    let slack = b.host().max_degree();
    let o = Oracle { b: b.clone() };
    let even = o.split(Parity::Even, d, slack);
    let odd = o.split(Parity::Odd, d, slack);
    assert_eq!((split.even, split.odd), (even, odd));
    let r = tangent_dims_structured(&b, &opts, &Budget::unlimited()).unwrap().structured.unwrap();
    let (tangent, obstruction) = o.structured(d, slack);
    assert_eq!((r.tangent_dim, r.obstruction_dim), (tangent, obstruction));
    (even, odd, tangent, obstruction)
}

fn block(d: usize) -> BilinearStructure {
    classify_brieskorn(d, 1, 3, 2).unwrap().witness
}

#[test]
fn node() {
    let b = rank_one_quadratic(Arc::new(mf_xy(1, 0).unwrap())).unwrap();
    assert_eq!(check(b), ((1, 0), (0, 0), 0, 0));
}

#[test]
fn node_pair_constant_form() {
    assert_eq!(check(node_pair()), ((2, 0), (1, 1), 1, 1));
}

#[test]
fn one_block() {
    assert_eq!(check(block(1)), ((1, 0), (0, 1), 2, 0));
}

#[test]
fn two_blocks_twisted() {
    assert_eq!(check(block(2)), ((1, 1), (2, 0), 5, 1));
}
