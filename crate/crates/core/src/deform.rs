//! First-order deformation dimensions of a factorization.
//!
//! Deforming `M` together with its potential gives a tangent space
//! `t_M` sitting in `0 → Ext¹(M, M) → t_M → 𝓘 → 0`, where `𝓘` is the space
//! of potential directions `h` whose operator `h·1` is a coboundary.
//! Obstructions live in the cokernel of `h ↦ [h·1]` into `Ext⁰(M, M)`.
//!
//! Multiplication by `w` and by each partial derivative of `w` is
//! null-homotopic on any factorization of `w`, so `h ↦ [h·1]` factors
//! through the Tjurina algebra `𝒪 = R/(w, ∂w)`. Both `𝓘` and the map are
//! computed on the standard monomial basis of `𝒪`, and `𝓘` is reported as
//! a subspace of `𝒪`.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::bilinear::{BilinearStructure, StructureKind};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::homotopy::{adjoint_matrix, ext, ExtOptions, ExtResult};
use crate::linalg::RationalMatrix;
use crate::mf::{MatrixFactorization, MorphismPair, Parity};
use crate::poly::{tjurina, Monomial, Polynomial, Rational};

/// The map `𝒪 → Ext⁰(M, M)` on monomial bases, with its kernel `𝓘`.
#[derive(Clone, Debug)]
pub struct QExactIdeal {
    pub tjurina_basis: Vec<Monomial>,
    /// Column `i` holds the Ext⁰ coordinates of `eᵢ·1`.
    pub image: RationalMatrix,
    /// Basis of `𝓘` in coordinates over `tjurina_basis`.
    pub basis: Vec<Vec<Rational>>,
    pub ext: ExtResult,
}

impl QExactIdeal {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn tjurina_dim(&self) -> usize {
        self.tjurina_basis.len()
    }

    pub fn image_rank(&self) -> usize {
        self.image.rank()
    }
}

fn tjurina_basis(m: &MatrixFactorization) -> Result<Vec<Monomial>> {
    let (ring, mu) = tjurina(m.potential())?;
    if mu.is_none() {
        return Err(Error::NonIsolated(m.potential().to_string()));
    }
    Ok(ring.monomial_basis().expect("finite quotient").to_vec())
}

/// Computes `𝓘 ⊂ 𝒪` by classifying each `eᵢ·1` in `Ext⁰`.
pub fn q_exact_ideal(m: &Arc<MatrixFactorization>, options: &ExtOptions, budget: &Budget) -> Result<QExactIdeal> {
    let basis = tjurina_basis(m)?;
    let top = basis.iter().map(Monomial::degree).max().unwrap_or(0);
    let mut opts = options.clone();
    opts.min_degree = opts.min_degree.max(top);
    let e = ext(m, m, &opts, budget)?.require_stable()?;
    let id = MorphismPair::identity(m.clone());
    let n = e.dim(Parity::Even);
    let mut image = RationalMatrix::zeros(n, basis.len());
    for (j, mono) in basis.iter().enumerate() {
        let h = Polynomial::monomial(m.vars(), mono.clone(), Rational::one());
        let coords = e.classify(&id.scale_poly(&h))?;
        for (i, c) in coords.into_iter().enumerate() {
            image.set(i, j, c);
        }
    }
    let kernel = if n == 0 {
        (0..basis.len())
            .map(|i| (0..basis.len()).map(|j| Rational::from_integer(i64::from(i == j).into())).collect())
            .collect()
    } else {
        image.kernel_basis()
    };
    Ok(QExactIdeal {
        tjurina_basis: basis,
        image,
        basis: kernel,
        ext: e,
    })
}

/// Dimensions of the structured problem: the adjoint-eigenspace parts of
/// `Ext` that govern deformations preserving a structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuredDims {
    pub kind: StructureKind,
    /// `(plus, minus)` parts of `Ext⁰`.
    pub ext0_split: (usize, usize),
    /// `(plus, minus)` parts of `Ext¹`.
    pub ext1_split: (usize, usize),
    /// `Ext¹⁻` for untwisted structures, `Ext¹⁺` for twisted ones.
    pub ext1_signed_dim: usize,
    /// `Ext⁰⁺` for untwisted structures, `Ext⁰⁻` for twisted ones.
    pub ext0_signed_dim: usize,
    pub tangent_dim: usize,
    /// Cokernel of `𝒪 → Ext⁰` projected onto the signed part.
    pub obstruction_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationReport {
    pub ext0_dim: usize,
    pub ext1_dim: usize,
    pub ideal_dim: usize,
    pub tangent_dim: usize,
    pub obstruction_dim: usize,
    pub tjurina_dim: usize,
    pub structured: Option<StructuredDims>,
    pub stabilized: bool,
    pub truncation_degree: u32,
}

fn report(q: &QExactIdeal) -> DeformationReport {
    let (ext0, ext1) = q.ext.dims;
    DeformationReport {
        ext0_dim: ext0,
        ext1_dim: ext1,
        ideal_dim: q.dim(),
        tangent_dim: ext1 + q.dim(),
        obstruction_dim: ext0 - q.image_rank(),
        tjurina_dim: q.tjurina_dim(),
        structured: None,
        stabilized: q.ext.stabilized,
        truncation_degree: q.ext.truncation_degree,
    }
}

/// `(dim Ext¹, dim 𝓘, dim t_M)` and the obstruction dimension.
pub fn tangent_dims(m: &Arc<MatrixFactorization>, options: &ExtOptions, budget: &Budget) -> Result<DeformationReport> {
    Ok(report(&q_exact_ideal(m, options, budget)?))
}

/// Dimension of the cokernel of `h ↦ [h·1]` into `Ext⁰`.
pub fn obstruction_dims(m: &Arc<MatrixFactorization>, options: &ExtOptions, budget: &Budget) -> Result<usize> {
    Ok(tangent_dims(m, options, budget)?.obstruction_dim)
}

/// `(1 + σA)`, the eigenprojection onto the `σ` part up to a factor 2.
fn eigen_projector(a: &RationalMatrix, sigma: i64) -> RationalMatrix {
    let n = a.rows();
    let mut p = RationalMatrix::zeros(n, n);
    let s = Rational::from_integer(sigma.into());
    for i in 0..n {
        for j in 0..n {
            let mut v = a.get(i, j) * &s;
            if i == j {
                v += Rational::one();
            }
            p.set(i, j, v);
        }
    }
    p
}

fn product(a: &RationalMatrix, b: &RationalMatrix) -> RationalMatrix {
    let mut out = RationalMatrix::zeros(a.rows(), b.cols());
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            let mut acc = Rational::zero();
            for k in 0..a.cols() {
                acc += a.get(i, k) * b.get(k, j);
            }
            out.set(i, j, acc);
        }
    }
    out
}

fn split(a: &RationalMatrix) -> (usize, usize) {
    (eigen_projector(a, 1).rank(), eigen_projector(a, -1).rank())
}

/// The report of [`tangent_dims`] together with the structured dimensions
/// for `B`: untwisted structures use `Ext¹⁻` and `Ext⁰⁺`, twisted ones use
/// `Ext¹⁺` and `Ext⁰⁻`.
pub fn tangent_dims_structured(b: &BilinearStructure, options: &ExtOptions, budget: &Budget) -> Result<DeformationReport> {
    let report_b = b.verify();
    if !report_b.is_valid() {
        return Err(Error::Invalid(format!("structure is not valid: {}", report_b.violations[0])));
    }
    let q = q_exact_ideal(b.host(), options, budget)?;
    let mut out = report(&q);
    let a0 = adjoint_matrix(&q.ext, b, Parity::Even)?;
    let a1 = adjoint_matrix(&q.ext, b, Parity::Odd)?;
    let ext0_split = split(&a0);
    let ext1_split = split(&a1);
    if ext0_split.0 + ext0_split.1 != out.ext0_dim || ext1_split.0 + ext1_split.1 != out.ext1_dim {
        return Err(Error::Invalid("adjoint is not an involution on Ext".into()));
    }
    let (sigma1, sigma0) = match b.kind() {
        StructureKind::Untwisted => (-1, 1),
        StructureKind::Twisted => (1, -1),
    };
    let pick = |s: (usize, usize), sigma: i64| if sigma == 1 { s.0 } else { s.1 };
    let ext1_signed_dim = pick(ext1_split, sigma1);
    let ext0_signed_dim = pick(ext0_split, sigma0);
    let projected = product(&eigen_projector(&a0, sigma0), &q.image);
    let obstruction_dim = ext0_signed_dim - projected.rank();
    out.structured = Some(StructuredDims {
        kind: b.kind(),
        ext0_split,
        ext1_split,
        ext1_signed_dim,
        ext0_signed_dim,
        tangent_dim: ext1_signed_dim + q.dim(),
        obstruction_dim,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bilinear::{classify_brieskorn, Sign};
    use crate::matrix::PolyMatrix;
    use crate::mf::mf_xy;
    use crate::poly::Vars;

    fn dims(m: MatrixFactorization) -> DeformationReport {
        tangent_dims(&Arc::new(m), &ExtOptions::default(), &Budget::unlimited()).unwrap()
    }

    fn x_pair(a: &str, b: &str, w: &str) -> MatrixFactorization {
        let v = Vars::new(&["x"]).unwrap();
        MatrixFactorization::parse(&v, &[&[a]], &[&[b]], w).unwrap()
    }

    #[test]
    fn node_pair() {
        let r = dims(mf_xy(1, 1).unwrap());
        assert_eq!((r.ext1_dim, r.ideal_dim, r.tangent_dim), (2, 0, 2));
        assert_eq!(r.obstruction_dim, 1);
        let r = dims(mf_xy(1, 0).unwrap());
        assert_eq!((r.ext1_dim, r.ideal_dim, r.tangent_dim, r.obstruction_dim), (0, 0, 0, 0));
    }

    #[test]
    fn cusp_pair() {
        let r = dims(x_pair("x", "x^2", "x^3"));
        assert_eq!((r.ext1_dim, r.ideal_dim, r.tangent_dim), (1, 1, 2));
        assert_eq!(r.obstruction_dim, 0);
        assert_eq!(r.tjurina_dim, 2);
        let r = dims(x_pair("x", "x", "x^2"));
        assert_eq!((r.tjurina_dim, r.ideal_dim), (1, 0));
    }

    #[test]
    fn structured_node_pair() {
        let m = Arc::new(mf_xy(1, 1).unwrap());
        let v = m.vars().clone();
        let id = PolyMatrix::identity(&v, 2);
        let b = BilinearStructure::new(m, StructureKind::Untwisted, Sign::Plus, id.clone(), id.neg()).unwrap();
        let r = tangent_dims_structured(&b, &ExtOptions::default(), &Budget::unlimited()).unwrap();
        let s = r.structured.unwrap();
        assert_eq!(s.ext1_split.0 + s.ext1_split.1, 2);
        assert_eq!(s.ext1_signed_dim, 1);
        assert!(s.ext0_signed_dim >= 1);
    }

    #[test]
    fn structured_cusp_pair() {
        let c = classify_brieskorn(1, 1, 3, 2).unwrap();
        let r = tangent_dims_structured(&c.witness, &ExtOptions::default(), &Budget::unlimited()).unwrap();
        let s = r.structured.unwrap();
        assert_eq!(s.ext1_split.0 + s.ext1_split.1, 1);
        assert_eq!(s.ext0_split.0 + s.ext0_split.1, 1);
    }
}
