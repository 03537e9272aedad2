//! Bilinear structures on matrix factorizations.
//!
//! An untwisted structure is an isomorphism `b: M → M^*`, stored as the
//! full block `[[0, b₁], [b₀, 0]]`; it must satisfy `ᵗQ b = −b Q`, i.e.
//!
//! * `ᵗφ b₀ = −b₁ φ` and `ᵗψ b₁ = −b₀ ψ`,
//! * `ᵗb₀ = −ε b₁` (ε = +1 quadratic, ε = −1 symplectic).
//!
//! A twisted structure is an isomorphism `q: M → M^T`, stored as
//! `diag(q₀, q₁)`, with `ᵗQ q = q Q`, i.e.
//!
//! * `ᵗφ q₁ = q₀ ψ` and `ᵗψ q₀ = q₁ φ`,
//! * `ᵗqᵢ = ε qᵢ`.
//!
//! Both kinds must be invertible at the origin. The adjoint of a morphism
//! `f: M → M'` is `f^adj = B⁻¹ ᵗF B'` on full blocks.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::coords::{assemble, enumerate_unknowns, unit_matrices, CoordIndex};
use crate::error::{Error, Result};
use crate::homotopy::differential;
use crate::linalg::{sparse_kernel, Echelon, SparseVec};
use crate::matrix::PolyMatrix;
use crate::mf::{GaugePair, MatrixFactorization, MorphismPair, VerificationReport};
use crate::poly::{Monomial, Polynomial, Rational, Vars};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StructureKind {
    Untwisted,
    Twisted,
}

impl StructureKind {
    /// Degree shift of the structure map: 1 for `M → M^*`, 0 for `M → M^T`.
    pub fn parity(self) -> usize {
        match self {
            StructureKind::Untwisted => 1,
            StructureKind::Twisted => 0,
        }
    }

    fn from_parity(p: usize) -> Self {
        if p % 2 == 1 {
            StructureKind::Untwisted
        } else {
            StructureKind::Twisted
        }
    }

    /// The sign `s` in `D(f)^adj = s·(−1)^{|f|}·D(f^adj)`.
    pub fn commutation_sign(self) -> i64 {
        match self {
            StructureKind::Untwisted => 1,
            StructureKind::Twisted => -1,
        }
    }
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StructureKind::Untwisted => "untwisted",
            StructureKind::Twisted => "twisted",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i64) -> Option<Self> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn negate(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn times(self, other: Sign) -> Self {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    fn rational(self) -> Rational {
        Rational::from_integer(self.value().into())
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct BilinearStructure {
    kind: StructureKind,
    sign: Sign,
    b0: PolyMatrix,
    b1: PolyMatrix,
    host: Arc<MatrixFactorization>,
}

impl BilinearStructure {
    pub fn new(
        host: Arc<MatrixFactorization>,
        kind: StructureKind,
        sign: Sign,
        b0: PolyMatrix,
        b1: PolyMatrix,
    ) -> Result<Self> {
        let r = host.rank();
        for (name, m) in [("b0", &b0), ("b1", &b1)] {
            if m.rows() != r || m.cols() != r {
                return Err(Error::DimensionMismatch(format!(
                    "{name} is {}x{}, host has rank {r}",
                    m.rows(),
                    m.cols()
                )));
            }
            m.vars().same(host.vars())?;
        }
        Ok(BilinearStructure {
            kind,
            sign,
            b0,
            b1,
            host,
        })
    }

    pub fn kind(&self) -> StructureKind {
        self.kind
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn b0(&self) -> &PolyMatrix {
        &self.b0
    }

    pub fn b1(&self) -> &PolyMatrix {
        &self.b1
    }

    pub fn host(&self) -> &Arc<MatrixFactorization> {
        &self.host
    }

    /// Full `2r × 2r` block of the structure map.
    pub fn full_block(&self) -> PolyMatrix {
        full_block(self.kind, &self.b0, &self.b1)
    }

    /// The sign for which the symmetry condition holds, if any.
    pub fn detect_sign(&self) -> Option<Sign> {
        detect_sign(self.kind, &self.b0, &self.b1)
    }

    pub fn verify(&self) -> VerificationReport {
        verify_structure(self)
    }

    pub fn is_valid(&self) -> bool {
        self.verify().is_valid()
    }

    /// Same blocks with a different host (used after renaming variables).
    pub fn rehost(&self, host: Arc<MatrixFactorization>) -> Result<Self> {
        Self::new(host, self.kind, self.sign, self.b0.clone(), self.b1.clone())
    }

    /// Renames the variables of the structure and its host positionally.
    pub fn rename(&self, vars: &crate::poly::Vars) -> Result<Self> {
        let host = Arc::new(self.host.rename(vars)?);
        Self::new(host, self.kind, self.sign, self.b0.rename(vars)?, self.b1.rename(vars)?)
    }

    /// The structure over a larger variable list.
    pub fn embed(&self, host: Arc<MatrixFactorization>) -> Result<Self> {
        let vars = host.vars().clone();
        Self::new(host, self.kind, self.sign, self.b0.embed(&vars)?, self.b1.embed(&vars)?)
    }
}

impl fmt::Debug for BilinearStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Structure({}, {}, b0: {}, b1: {})",
            self.kind, self.sign, self.b0, self.b1
        )
    }
}

fn full_block(kind: StructureKind, b0: &PolyMatrix, b1: &PolyMatrix) -> PolyMatrix {
    let z = PolyMatrix::zeros(b0.vars(), b0.rows(), b0.cols());
    match kind {
        StructureKind::Untwisted => PolyMatrix::block(&z, b1, b0, &z),
        StructureKind::Twisted => PolyMatrix::block(b0, &z, &z, b1),
    }
    .expect("square blocks")
}

/// Residuals of the two adjoint conditions.
fn adjoint_residuals(kind: StructureKind, m: &MatrixFactorization, b0: &PolyMatrix, b1: &PolyMatrix) -> [PolyMatrix; 2] {
    let (phi, psi) = (m.phi(), m.psi());
    let (tphi, tpsi) = (phi.transpose(), psi.transpose());
    let mul = |a: &PolyMatrix, b: &PolyMatrix| a.mul(b).expect("shapes");
    match kind {
        StructureKind::Untwisted => [
            mul(&tphi, b0).add(&mul(b1, phi)).expect("shapes"),
            mul(&tpsi, b1).add(&mul(b0, psi)).expect("shapes"),
        ],
        StructureKind::Twisted => [
            mul(&tphi, b1).sub(&mul(b0, psi)).expect("shapes"),
            mul(&tpsi, b0).sub(&mul(b1, phi)).expect("shapes"),
        ],
    }
}

/// Residuals of the symmetry conditions for sign `sign`.
fn symmetry_residuals(kind: StructureKind, sign: Sign, b0: &PolyMatrix, b1: &PolyMatrix) -> [PolyMatrix; 2] {
    let e = sign.rational();
    match kind {
        // ᵗb₀ + ε b₁ = 0 (the transposed condition is equivalent)
        StructureKind::Untwisted => [
            b0.transpose().add(&b1.scale(&e)).expect("shapes"),
            PolyMatrix::zeros(b0.vars(), b0.rows(), b0.cols()),
        ],
        StructureKind::Twisted => [
            b0.transpose().sub(&b0.scale(&e)).expect("shapes"),
            b1.transpose().sub(&b1.scale(&e)).expect("shapes"),
        ],
    }
}

fn detect_sign(kind: StructureKind, b0: &PolyMatrix, b1: &PolyMatrix) -> Option<Sign> {
    if b0.is_zero() && b1.is_zero() {
        return None;
    }
    [Sign::Plus, Sign::Minus]
        .into_iter()
        .find(|&s| symmetry_residuals(kind, s, b0, b1).iter().all(PolyMatrix::is_zero))
}

fn invertible_at_origin(m: &PolyMatrix) -> bool {
    m.eval_origin().determinant().map(|d| !d.is_zero()).unwrap_or(false)
}

/// Checks the adjoint conditions, the symmetry for the declared sign, and
/// invertibility at the origin.
pub fn verify_structure(b: &BilinearStructure) -> VerificationReport {
    let mut report = VerificationReport::default();
    for v in b.host.verify().violations {
        report.violations.push(crate::mf::Violation {
            check: format!("host: {}", v.check),
            ..v
        });
    }
    let [a0, a1] = adjoint_residuals(b.kind, &b.host, &b.b0, &b.b1);
    let [s0, s1] = symmetry_residuals(b.kind, b.sign, &b.b0, &b.b1);
    match b.kind {
        StructureKind::Untwisted => {
            report.require_zero("adjoint: t(phi)*b0 = -b1*phi", &a0);
            report.require_zero("adjoint: t(psi)*b1 = -b0*psi", &a1);
            let name = if b.sign == Sign::Plus {
                "symmetry: t(b0) = -b1"
            } else {
                "symmetry: t(b0) = b1"
            };
            report.require_zero(name, &s0);
        }
        StructureKind::Twisted => {
            report.require_zero("adjoint: t(phi)*q1 = q0*psi", &a0);
            report.require_zero("adjoint: t(psi)*q0 = q1*phi", &a1);
            let (n0, n1) = if b.sign == Sign::Plus {
                ("symmetry: t(q0) = q0", "symmetry: t(q1) = q1")
            } else {
                ("symmetry: t(q0) = -q0", "symmetry: t(q1) = -q1")
            };
            report.require_zero(n0, &s0);
            report.require_zero(n1, &s1);
        }
    }
    if !invertible_at_origin(&b.b0) {
        report.push("invertible at origin: b0(0)", "determinant vanishes".into());
    }
    if !invertible_at_origin(&b.b1) {
        report.push("invertible at origin: b1(0)", "determinant vanishes".into());
    }
    report
}

/// Transports a structure along the even automorphism `F = diag(S, T)`:
/// the host becomes `F⁻¹QF` (so `φ ↦ T⁻¹φS`, `ψ ↦ S⁻¹ψT`) and the form
/// becomes `ᵗF b F`. `S` and `T` must have polynomial inverses.
pub fn gauge_structure(b: &BilinearStructure, g: &GaugePair) -> Result<BilinearStructure> {
    let m = &b.host;
    if g.s.rows() != m.rank() {
        return Err(Error::DimensionMismatch("gauge size differs from host rank".into()));
    }
    let s_inv = g
        .s
        .inverse_exact()?
        .ok_or_else(|| Error::NotInvertible("S has no polynomial inverse".into()))?;
    let t_inv = g
        .t
        .inverse_exact()?
        .ok_or_else(|| Error::NotInvertible("T has no polynomial inverse".into()))?;
    let phi = t_inv.mul(m.phi())?.mul(&g.s)?;
    let psi = s_inv.mul(m.psi())?.mul(&g.t)?;
    let host = Arc::new(MatrixFactorization::new(phi, psi, m.potential().clone())?);
    let (ts, tt) = (g.s.transpose(), g.t.transpose());
    let (b0, b1) = match b.kind {
        StructureKind::Untwisted => (tt.mul(&b.b0)?.mul(&g.s)?, ts.mul(&b.b1)?.mul(&g.t)?),
        StructureKind::Twisted => (ts.mul(&b.b0)?.mul(&g.s)?, tt.mul(&b.b1)?.mul(&g.t)?),
    };
    BilinearStructure::new(host, b.kind, b.sign, b0, b1)
}

/// `f^adj = B⁻¹ ᵗF B'` for `f: M → M'` with `B` on `M` and `B'` on `M'`.
///
/// Applying the adjoint twice multiplies by `ε ε'`, so it is an involution
/// when both structures have the same sign.
pub fn adjoint(f: &MorphismPair, b: &BilinearStructure, b_target: &BilinearStructure) -> Result<MorphismPair> {
    if b.kind != b_target.kind {
        return Err(Error::KindMismatch(format!(
            "source structure is {}, target structure is {}",
            b.kind, b_target.kind
        )));
    }
    if **f.source() != *b.host || **f.target() != *b_target.host {
        return Err(Error::Invalid("structures are not on the source and target of the morphism".into()));
    }
    let b_inv = b
        .full_block()
        .inverse_exact()?
        .ok_or_else(|| Error::NotInvertible("structure has no polynomial inverse".into()))?;
    let adj = b_inv.mul(&f.to_block().transpose())?.mul(&b_target.full_block())?;
    MorphismPair::from_block(f.target().clone(), f.source().clone(), f.parity(), &adj)
}

/// Outcome of [`check_commutation`].
#[derive(Clone, Debug)]
pub struct CommutationReport {
    pub sign: i64,
    pub holds: bool,
    pub lhs: MorphismPair,
    pub rhs: MorphismPair,
}

/// Compares `D(f)^adj` with `s·(−1)^{|f|}·D(f^adj)` exactly.
pub fn check_commutation(f: &MorphismPair, b: &BilinearStructure, b_target: &BilinearStructure) -> Result<CommutationReport> {
    let s = b.kind.commutation_sign();
    let lhs = adjoint(&differential(f)?, b, b_target)?;
    let rhs = differential(&adjoint(f, b, b_target)?)?.scale(&Rational::from_integer((s * f.parity().sign()).into()));
    Ok(CommutationReport {
        sign: s,
        holds: lhs == rhs,
        lhs,
        rhs,
    })
}

/// Type of the tensor of two structures: kind by added degree shifts, and
/// sign `εε'`, negated when both are untwisted.
pub fn predicted_tensor_type(a: (StructureKind, Sign), b: (StructureKind, Sign)) -> (StructureKind, Sign) {
    let kind = StructureKind::from_parity(a.0.parity() + b.0.parity());
    let mut sign = a.1.times(b.1);
    if a.0 == StructureKind::Untwisted && b.0 == StructureKind::Untwisted {
        sign = sign.negate();
    }
    (kind, sign)
}

/// Result of [`tensor_structure`].
#[derive(Clone, Debug)]
pub struct TensorStructure {
    pub structure: BilinearStructure,
    /// Signs applied to the four blocks `c_a ⊗ c'_b`, in the order
    /// `(0,0), (0,1), (1,0), (1,1)`.
    pub block_signs: [Sign; 4],
    /// Whether the default signs `(−1)^{a·p'}` already worked.
    pub default_signs: bool,
}

/// Position of the summand `M_a ⊗ M'_b` inside `T₀ ⊕ T₁` with
/// `T₀ = [M₀⊗M'₀, M₁⊗M'₁]`, `T₁ = [M₀⊗M'₁, M₁⊗M'₀]`.
fn summand_slot(a: usize, b: usize) -> usize {
    match (a % 2, b % 2) {
        (0, 0) => 0,
        (1, 1) => 1,
        (0, 1) => 2,
        _ => 3,
    }
}

/// Structure on `tensor(M, M')` assembled from Kronecker products of the
/// blocks. The block on `M_a ⊗ M'_b` is `±c_a ⊗ c'_b` where `c_a` is the
/// part of the structure defined on `M_a`. The signs `(−1)^{a·p'}` are tried
/// first (`p'` the degree shift of the second structure); if they fail, the
/// sixteen sign patterns are searched in lexicographic order.
pub fn tensor_structure(b: &BilinearStructure, b2: &BilinearStructure) -> Result<TensorStructure> {
    let host = Arc::new(b.host.tensor(&b2.host)?);
    let vars = host.vars().clone();
    let (p, p2) = (b.kind.parity(), b2.kind.parity());
    let kind = StructureKind::from_parity(p + p2);
    let c = [b.b0.embed(&vars)?, b.b1.embed(&vars)?];
    let c2 = [b2.b0.embed(&vars)?, b2.b1.embed(&vars)?];
    let n = b.host.rank() * b2.host.rank();
    let assemble = |signs: &[Sign; 4]| -> Result<(PolyMatrix, PolyMatrix)> {
        let mut full = PolyMatrix::zeros(&vars, 4 * n, 4 * n);
        for a in 0..2 {
            for bb in 0..2 {
                let block = c[a].kron(&c2[bb])?.scale(&signs[2 * a + bb].rational());
                let col = summand_slot(a, bb);
                let row = summand_slot(a + p, bb + p2);
                full.paste(row * n, col * n, &block);
            }
        }
        let r = 2 * n;
        Ok(match kind {
            StructureKind::Untwisted => (full.submatrix(r, r, 0, r), full.submatrix(0, r, r, r)),
            StructureKind::Twisted => (full.submatrix(0, r, 0, r), full.submatrix(r, r, r, r)),
        })
    };
    let koszul: [Sign; 4] = std::array::from_fn(|i| {
        let a = i / 2;
        if a * p2 % 2 == 1 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    });
    let mut candidates = vec![koszul];
    for mask in 0..16u32 {
        let s: [Sign; 4] = std::array::from_fn(|i| if mask >> (3 - i) & 1 == 1 { Sign::Minus } else { Sign::Plus });
        if s != koszul {
            candidates.push(s);
        }
    }
    let mut last_failure = String::new();
    for (k, signs) in candidates.iter().enumerate() {
        let (b0, b1) = assemble(signs)?;
        let Some(sign) = detect_sign(kind, &b0, &b1) else {
            last_failure = "symmetry: blocks are neither symmetric nor antisymmetric".into();
            continue;
        };
        let s = BilinearStructure::new(host.clone(), kind, sign, b0, b1)?;
        let report = s.verify();
        if report.is_valid() {
            return Ok(TensorStructure {
                structure: s,
                block_signs: *signs,
                default_signs: k == 0,
            });
        }
        last_failure = report.violations[0].to_string();
    }
    Err(Error::Construction(format!(
        "no sign pattern gives a valid tensor structure; last failure: {last_failure}"
    )))
}

/// Solutions of one sign in [`structure_search`].
#[derive(Clone, Debug)]
pub struct SignedSolutions {
    pub sign: Sign,
    /// Basis of the solution space, as `(b₀, b₁)` pairs.
    pub basis: Vec<(PolyMatrix, PolyMatrix)>,
    /// Dimension of the space of constant parts `(b₀(0), b₁(0))`.
    pub constant_dim: usize,
    /// Whether a generic solution is invertible at the origin.
    pub invertible: bool,
    /// A solution invertible at the origin, when one exists.
    pub witness: Option<BilinearStructure>,
}

#[derive(Clone, Debug)]
pub struct StructureSearch {
    pub kind: StructureKind,
    pub max_degree: u32,
    /// Dimension of the solution space of the adjoint conditions alone.
    pub adjoint_dim: usize,
    pub plus: SignedSolutions,
    pub minus: SignedSolutions,
}

impl StructureSearch {
    pub fn by_sign(&self, s: Sign) -> &SignedSolutions {
        match s {
            Sign::Plus => &self.plus,
            Sign::Minus => &self.minus,
        }
    }
}

/// Finds all pairs `(b₀, b₁)` with entries of degree `≤ max_degree` that
/// satisfy the adjoint conditions of `kind`, split by symmetry sign, and
/// decides which signs admit a structure invertible at the origin.
pub fn structure_search(m: &Arc<MatrixFactorization>, kind: StructureKind, max_degree: u32) -> Result<StructureSearch> {
    let vars = m.vars().clone();
    let r = m.rank();
    let shapes = [(r, r), (r, r)];
    let monos = Monomial::all_up_to_degree(vars.len(), max_degree);
    let unknowns = enumerate_unknowns(&shapes, &monos, &[true, true]);
    let mut index = CoordIndex::default();
    let columns: Vec<SparseVec> = unknowns
        .iter()
        .map(|u| {
            let e = unit_matrices(&vars, &shapes, u);
            index.encode(&adjoint_residuals(kind, m, &e[0], &e[1]))
        })
        .collect();
    let kernel = sparse_kernel(&columns, index.len());
    let adjoint_dim = kernel.len();
    let solutions: Vec<(PolyMatrix, PolyMatrix)> = kernel
        .iter()
        .map(|v| {
            let mut ms = assemble(&vars, &shapes, &unknowns, v);
            let b1 = ms.pop().expect("two blocks");
            let b0 = ms.pop().expect("two blocks");
            (b0, b1)
        })
        .collect();
    let plus = signed_solutions(m, kind, Sign::Plus, &solutions)?;
    let minus = signed_solutions(m, kind, Sign::Minus, &solutions)?;
    Ok(StructureSearch {
        kind,
        max_degree,
        adjoint_dim,
        plus,
        minus,
    })
}

/// The involution whose eigenspaces are the two symmetry types.
fn tau(kind: StructureKind, b0: &PolyMatrix, b1: &PolyMatrix) -> (PolyMatrix, PolyMatrix) {
    match kind {
        StructureKind::Untwisted => (b1.transpose().neg(), b0.transpose().neg()),
        StructureKind::Twisted => (b0.transpose(), b1.transpose()),
    }
}

fn flatten_pair(index: &mut CoordIndex, b0: &PolyMatrix, b1: &PolyMatrix) -> SparseVec {
    index.encode(&[b0.clone(), b1.clone()])
}

fn signed_solutions(
    m: &Arc<MatrixFactorization>,
    kind: StructureKind,
    sign: Sign,
    solutions: &[(PolyMatrix, PolyMatrix)],
) -> Result<SignedSolutions> {
    let half = Rational::new(1.into(), 2.into());
    let e = sign.rational();
    // project onto the eigenspace and extract a basis
    let mut index = CoordIndex::default();
    let mut ech = Echelon::new();
    let mut basis = Vec::new();
    for (b0, b1) in solutions {
        let (t0, t1) = tau(kind, b0, b1);
        let p0 = b0.add(&t0.scale(&e))?.scale(&half);
        let p1 = b1.add(&t1.scale(&e))?.scale(&half);
        if p0.is_zero() && p1.is_zero() {
            continue;
        }
        let v = flatten_pair(&mut index, &p0, &p1);
        if ech.insert(&v).is_some() {
            basis.push((p0, p1));
        }
    }
    // constant parts
    let constants: Vec<(PolyMatrix, PolyMatrix)> = basis
        .iter()
        .map(|(b0, b1)| (const_part(b0), const_part(b1)))
        .collect();
    let mut cindex = CoordIndex::default();
    let mut cech = Echelon::new();
    let mut cbasis = Vec::new();
    for (c0, c1) in &constants {
        let v = flatten_pair(&mut cindex, c0, c1);
        if cech.insert(&v).is_some() {
            cbasis.push((c0.clone(), c1.clone()));
        }
    }
    let constant_dim = cbasis.len();
    let invertible = generic_invertible(&cbasis)?;
    let witness = if invertible {
        find_witness(m, kind, sign, &basis)?
    } else {
        None
    };
    Ok(SignedSolutions {
        sign,
        basis,
        constant_dim,
        invertible,
        witness,
    })
}

fn const_part(m: &PolyMatrix) -> PolyMatrix {
    m.map(|p| Polynomial::constant(p.vars(), p.constant_term()))
}

/// Whether `Σ λᵢ (c₀ᵢ, c₁ᵢ)` has both blocks invertible for generic `λ`,
/// decided by a symbolic determinant in the parameters `λ`.
fn generic_invertible(cbasis: &[(PolyMatrix, PolyMatrix)]) -> Result<bool> {
    if cbasis.is_empty() {
        return Ok(false);
    }
    let names: Vec<String> = (0..cbasis.len()).map(|i| format!("l{i}")).collect();
    let params = Vars::new(&names)?;
    let r = cbasis[0].0.rows();
    for block in 0..2 {
        let mut g = PolyMatrix::zeros(&params, r, r);
        for (k, pair) in cbasis.iter().enumerate() {
            let c = if block == 0 { &pair.0 } else { &pair.1 };
            let lam = Polynomial::var(&params, &names[k])?;
            for i in 0..r {
                for j in 0..r {
                    let v = c.get(i, j).constant_term();
                    if !v.is_zero() {
                        let cur = g.get(i, j).clone();
                        g.set(i, j, &cur + &lam.scale(&v));
                    }
                }
            }
        }
        if g.determinant()?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// First combination (basis vectors, then small integer mixtures) whose
/// constant part is invertible, normalized so that the first nonzero
/// constant entry of `b₀` is one.
fn find_witness(
    m: &Arc<MatrixFactorization>,
    kind: StructureKind,
    sign: Sign,
    basis: &[(PolyMatrix, PolyMatrix)],
) -> Result<Option<BilinearStructure>> {
    let n = basis.len();
    let mut trials: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    for shift in 1..=n as i64 + 2 {
        trials.push((0..n as i64).map(|j| 1 + (j * shift) % (n as i64 + 3)).collect());
    }
    for coeffs in trials {
        let mut b0 = PolyMatrix::zeros(m.vars(), m.rank(), m.rank());
        let mut b1 = b0.clone();
        for (c, (x0, x1)) in coeffs.iter().zip(basis) {
            let c = Rational::from_integer((*c).into());
            b0 = b0.add(&x0.scale(&c))?;
            b1 = b1.add(&x1.scale(&c))?;
        }
        if invertible_at_origin(&b0) && invertible_at_origin(&b1) {
            let lead = b0
                .entries()
                .iter()
                .map(Polynomial::constant_term)
                .find(|c| !c.is_zero())
                .unwrap_or_else(Rational::one);
            let inv = lead.recip();
            let s = BilinearStructure::new(m.clone(), kind, sign, b0.scale(&inv), b1.scale(&inv))?;
            return Ok(Some(s));
        }
    }
    Ok(None)
}

/// Result of [`classify_brieskorn`].
#[derive(Clone, Debug)]
pub struct Classification {
    pub factors: usize,
    pub kind: StructureKind,
    pub sign: Sign,
    pub witness: BilinearStructure,
    pub untwisted: StructureSearch,
    pub twisted: StructureSearch,
}

/// Classifies the structures on `⊗ (xᵢ^n, xᵢ^{h−n})` with `d` factors:
/// exactly one kind and sign must admit an invertible structure, and it
/// must be unique up to scalar (one-dimensional constant parts).
pub fn classify_brieskorn(d: usize, n: u32, h: u32, max_degree: u32) -> Result<Classification> {
    if d == 0 || d > 4 {
        return Err(Error::ParameterOutOfRange(format!("number of factors must be 1..=4, got {d}")));
    }
    let m = Arc::new(crate::mf::mf_brieskorn(&vec![(n, h); d])?);
    let untwisted = structure_search(&m, StructureKind::Untwisted, max_degree)?;
    let twisted = structure_search(&m, StructureKind::Twisted, max_degree)?;
    let mut found = Vec::new();
    for s in [&untwisted, &twisted] {
        for sol in [&s.plus, &s.minus] {
            if sol.invertible {
                found.push((s.kind, sol));
            }
        }
    }
    match found.as_slice() {
        [(kind, sol)] => {
            if sol.constant_dim != 1 {
                return Err(Error::NonUnique(format!(
                    "{kind} {} structures have a {}-dimensional space of constant parts",
                    sol.sign, sol.constant_dim
                )));
            }
            Ok(Classification {
                factors: d,
                kind: *kind,
                sign: sol.sign,
                witness: sol.witness.clone().expect("invertible solutions have a witness"),
                untwisted: untwisted.clone(),
                twisted: twisted.clone(),
            })
        }
        [] => Err(Error::Construction("no invertible structure found".into())),
        many => Err(Error::NonUnique(format!(
            "invertible structures exist for {} kind/sign combinations",
            many.len()
        ))),
    }
}

/// The quadratic structure `b₀ = 1`, `b₁ = −1` on a rank-one factorization.
pub fn rank_one_quadratic(m: Arc<MatrixFactorization>) -> Result<BilinearStructure> {
    let vars = m.vars().clone();
    BilinearStructure::new(
        m,
        StructureKind::Untwisted,
        Sign::Plus,
        PolyMatrix::identity(&vars, 1),
        PolyMatrix::identity(&vars, 1).neg(),
    )
}
