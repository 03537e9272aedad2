//! Matrix factorizations, their morphisms, and the basic constructions.
//!
//! A factorization `M = (φ, ψ)` of rank `r` is viewed as the graded module
//! `M₀ ⊕ M₁` with `φ: M₀ → M₁`, `ψ: M₁ → M₀` and odd operator
//! `Q = [[0, ψ], [φ, 0]]`, so `Q² = w·1` is the factorization identity.
//!
//! A morphism `f: M → M'` is stored by its two graded blocks `S` and `T`:
//!
//! * even: `S: M₀ → M'₀`, `T: M₁ → M'₁`, full block `[[S, 0], [0, T]]`;
//! * odd: `S: M₀ → M'₁`, `T: M₁ → M'₀`, full block `[[0, T], [S, 0]]`.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::matrix::PolyMatrix;
use crate::poly::{ModuleBasis, ModuleElement, Polynomial, Rational, Vars};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn add(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// `(−1)^{|f|}`.
    pub fn sign(self) -> i64 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// One failed identity, located at a matrix entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub check: String,
    pub row: usize,
    pub col: usize,
    pub value: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at ({}, {}): {}", self.check, self.row + 1, self.col + 1, self.value)
    }
}

/// Outcome of an exact verification; empty iff everything holds.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// Records every nonzero entry of `m` as a violation of `check`.
    pub(crate) fn require_zero(&mut self, check: &str, m: &PolyMatrix) {
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if !m.get(i, j).is_zero() {
                    self.violations.push(Violation {
                        check: check.to_string(),
                        row: i,
                        col: j,
                        value: m.get(i, j).to_string(),
                    });
                }
            }
        }
    }

    pub(crate) fn push(&mut self, check: &str, detail: String) {
        self.violations.push(Violation {
            check: check.to_string(),
            row: 0,
            col: 0,
            value: detail,
        });
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct MatrixFactorization {
    vars: Vars,
    phi: PolyMatrix,
    psi: PolyMatrix,
    potential: Polynomial,
}

impl MatrixFactorization {
    /// Packages `(φ, ψ)` with its declared potential. Shapes and variable
    /// lists are checked here; the factorization identities are checked by
    /// [`MatrixFactorization::verify`].
    pub fn new(phi: PolyMatrix, psi: PolyMatrix, potential: Polynomial) -> Result<Self> {
        if !phi.is_square() || !psi.is_square() || phi.rows() != psi.rows() {
            return Err(Error::DimensionMismatch(format!(
                "phi is {}x{} and psi is {}x{}; both must be square of equal size",
                phi.rows(),
                phi.cols(),
                psi.rows(),
                psi.cols()
            )));
        }
        if phi.rows() == 0 {
            return Err(Error::DimensionMismatch("rank must be at least 1".into()));
        }
        phi.vars().same(psi.vars())?;
        phi.vars().same(potential.vars())?;
        Ok(MatrixFactorization {
            vars: phi.vars().clone(),
            phi,
            psi,
            potential,
        })
    }

    /// Convenience constructor from polynomial text.
    pub fn parse(vars: &Vars, phi: &[&[&str]], psi: &[&[&str]], potential: &str) -> Result<Self> {
        Self::new(
            PolyMatrix::parse(vars, phi)?,
            PolyMatrix::parse(vars, psi)?,
            Polynomial::parse(potential, vars)?,
        )
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn rank(&self) -> usize {
        self.phi.rows()
    }

    pub fn phi(&self) -> &PolyMatrix {
        &self.phi
    }

    pub fn psi(&self) -> &PolyMatrix {
        &self.psi
    }

    pub fn potential(&self) -> &Polynomial {
        &self.potential
    }

    /// The odd operator `[[0, ψ], [φ, 0]]` on `M₀ ⊕ M₁`.
    pub fn q_matrix(&self) -> PolyMatrix {
        let z = PolyMatrix::zeros(&self.vars, self.rank(), self.rank());
        PolyMatrix::block(&z, &self.psi, &self.phi, &z).expect("square blocks")
    }

    /// Largest entry degree of `φ` and `ψ`.
    pub fn max_degree(&self) -> u32 {
        self.phi.max_degree().max(self.psi.max_degree())
    }

    pub fn verify(&self) -> VerificationReport {
        let mut report = VerificationReport::default();
        let w1 = PolyMatrix::scalar(&self.vars, self.rank(), &self.potential);
        let pp = self.phi.mul(&self.psi).expect("shapes checked").sub(&w1).expect("shapes");
        report.require_zero("phi*psi = w*1", &pp);
        let qp = self.psi.mul(&self.phi).expect("shapes checked").sub(&w1).expect("shapes");
        report.require_zero("psi*phi = w*1", &qp);
        let origin = |m: &PolyMatrix| m.map(|p| Polynomial::constant(p.vars(), p.constant_term()));
        report.require_zero("phi(0) = 0", &origin(&self.phi));
        report.require_zero("psi(0) = 0", &origin(&self.psi));
        report
    }

    pub fn is_valid(&self) -> bool {
        self.verify().is_valid()
    }

    /// `M[1] = (−ψ, −φ)`.
    pub fn shift(&self) -> Self {
        Self::new(self.psi.neg(), self.phi.neg(), self.potential.clone()).expect("same shapes")
    }

    /// `M^T = (ᵗψ, ᵗφ)`.
    pub fn transpose_dual(&self) -> Self {
        Self::new(self.psi.transpose(), self.phi.transpose(), self.potential.clone()).expect("same shapes")
    }

    /// `M^* = (−ᵗφ, −ᵗψ)`, which is both `(M^T)[1]` and `(M[1])^T`.
    pub fn dual(&self) -> Self {
        Self::new(
            self.phi.transpose().neg(),
            self.psi.transpose().neg(),
            self.potential.clone(),
        )
        .expect("same shapes")
    }

    /// `(φ, −ψ)`, a factorization of `−w`.
    pub fn negate_potential(&self) -> Self {
        Self::new(self.phi.clone(), self.psi.neg(), -&self.potential).expect("same shapes")
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        self.vars.same(&other.vars)?;
        if self.potential != other.potential {
            return Err(Error::PotentialMismatch {
                left: self.potential.to_string(),
                right: other.potential.to_string(),
            });
        }
        Self::new(
            PolyMatrix::block_diag(&self.phi, &other.phi)?,
            PolyMatrix::block_diag(&self.psi, &other.psi)?,
            self.potential.clone(),
        )
    }

    /// Tensor product over the union of the variable lists, with potential
    /// `w + w'`. Graded pieces are `[M₀⊗M'₀, M₁⊗M'₁]` in degree 0 and
    /// `[M₀⊗M'₁, M₁⊗M'₀]` in degree 1, Kronecker indices `i·r' + j`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let vars = self.vars.union(&other.vars);
        let a = self.embed(&vars)?;
        let b = other.embed(&vars)?;
        let one = PolyMatrix::identity(&vars, a.rank());
        let one_b = PolyMatrix::identity(&vars, b.rank());
        let i_phi = one.kron(&b.phi)?;
        let i_psi = one.kron(&b.psi)?;
        let phi_i = a.phi.kron(&one_b)?;
        let psi_i = a.psi.kron(&one_b)?;
        let big_phi = PolyMatrix::block(&i_phi, &psi_i, &phi_i, &i_psi.neg())?;
        let big_psi = PolyMatrix::block(&i_psi, &psi_i, &phi_i, &i_phi.neg())?;
        Self::new(big_phi, big_psi, &a.potential + &b.potential)
    }

    /// The same factorization over a larger variable list.
    pub fn embed(&self, vars: &Vars) -> Result<Self> {
        Self::new(self.phi.embed(vars)?, self.psi.embed(vars)?, self.potential.embed(vars)?)
    }

    /// Renames the variables positionally.
    pub fn rename(&self, vars: &Vars) -> Result<Self> {
        Self::new(self.phi.rename(vars)?, self.psi.rename(vars)?, self.potential.rename(vars)?)
    }

    /// Applies the ring automorphism `x_i ↦ −x_i` to every entry.
    pub fn negate_variable(&self, i: usize) -> Self {
        Self::new(
            self.phi.negate_variable(i),
            self.psi.negate_variable(i),
            self.potential.negate_variable(i),
        )
        .expect("same shapes")
    }

    /// Gauge action `(S, T)·(φ, ψ) = (TφS⁻¹, SψT⁻¹)`.
    ///
    /// Inverses are exact when `S` and `T` have polynomial inverses.
    /// Otherwise they are power series truncated at `truncation_degree`,
    /// the products are truncated likewise, and the result records it.
    pub fn gauge(&self, g: &GaugePair, truncation_degree: u32) -> Result<GaugeResult> {
        g.check(self)?;
        let exact = (g.s.inverse_exact()?, g.t.inverse_exact()?);
        let (s_inv, t_inv, truncated) = match exact {
            (Some(s), Some(t)) => (s, t, None),
            _ => (
                g.s.inverse_truncated(truncation_degree)?,
                g.t.inverse_truncated(truncation_degree)?,
                Some(truncation_degree),
            ),
        };
        let mut phi = g.t.mul(&self.phi)?.mul(&s_inv)?;
        let mut psi = g.s.mul(&self.psi)?.mul(&t_inv)?;
        if let Some(d) = truncated {
            phi = phi.truncate(d);
            psi = psi.truncate(d);
        }
        Ok(GaugeResult {
            mf: Self::new(phi, psi, self.potential.clone())?,
            truncated_at: truncated,
        })
    }

    /// Presentation of `coker φ` over `R/(w)` with the dimensions of its
    /// graded pieces (for the degree filtration of standard terms) up to
    /// `bound`.
    pub fn cok_presentation(&self, bound: u32, budget: &Budget) -> Result<CokPresentation> {
        let r = self.rank();
        let mut gens: Vec<ModuleElement> = (0..r).map(|j| self.phi.column_vec(j)).collect();
        if !self.potential.is_zero() {
            for i in 0..r {
                let mut e = vec![Polynomial::zero(&self.vars); r];
                e[i] = self.potential.clone();
                gens.push(e);
            }
        }
        let basis = ModuleBasis::compute(&self.vars, r, &gens, budget)?;
        let hilbert = basis.hilbert_values(bound);
        let cumulative = hilbert
            .iter()
            .scan(0, |acc, h| {
                *acc += h;
                Some(*acc)
            })
            .collect();
        Ok(CokPresentation {
            presentation: self.phi.clone(),
            hilbert,
            cumulative,
            finite: basis.quotient_is_finite(),
        })
    }
}

impl fmt::Debug for MatrixFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MF(phi: {}, psi: {}, w: {})", self.phi, self.psi, self.potential)
    }
}

/// Result of [`MatrixFactorization::cok_presentation`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CokPresentation {
    pub presentation: PolyMatrix,
    /// Number of standard module terms of each degree `0..=bound`.
    pub hilbert: Vec<usize>,
    /// Running sums of `hilbert`: dimension of the degree `≤ d` part.
    pub cumulative: Vec<usize>,
    pub finite: bool,
}

/// A pair `(S, T)` of matrices invertible at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugePair {
    pub s: PolyMatrix,
    pub t: PolyMatrix,
}

impl GaugePair {
    pub fn new(s: PolyMatrix, t: PolyMatrix) -> Result<Self> {
        if !s.is_square() || !t.is_square() || s.rows() != t.rows() {
            return Err(Error::DimensionMismatch("gauge blocks must be square of equal size".into()));
        }
        s.vars().same(t.vars())?;
        for (name, m) in [("S", &s), ("T", &t)] {
            if m.eval_origin().determinant()?.is_zero() {
                return Err(Error::NotInvertible(format!("{name}(0) is singular")));
            }
        }
        Ok(GaugePair { s, t })
    }

    pub fn identity(vars: &Vars, r: usize) -> Self {
        GaugePair {
            s: PolyMatrix::identity(vars, r),
            t: PolyMatrix::identity(vars, r),
        }
    }

    fn check(&self, m: &MatrixFactorization) -> Result<()> {
        if self.s.rows() != m.rank() {
            return Err(Error::DimensionMismatch(format!(
                "gauge of size {} on a rank {} factorization",
                self.s.rows(),
                m.rank()
            )));
        }
        m.vars().same(self.s.vars())
    }

    /// The gauge as the full even block `diag(S, T)`.
    pub fn block(&self) -> PolyMatrix {
        PolyMatrix::block_diag(&self.s, &self.t).expect("square")
    }
}

#[derive(Clone, Debug)]
pub struct GaugeResult {
    pub mf: MatrixFactorization,
    /// `Some(d)` when power-series inverses truncated at degree `d` were used.
    pub truncated_at: Option<u32>,
}

/// A graded map between two factorizations, see the module docs for the
/// block convention.
#[derive(Clone, PartialEq, Eq)]
pub struct MorphismPair {
    source: Arc<MatrixFactorization>,
    target: Arc<MatrixFactorization>,
    parity: Parity,
    s: PolyMatrix,
    t: PolyMatrix,
}

impl MorphismPair {
    pub fn new(
        source: Arc<MatrixFactorization>,
        target: Arc<MatrixFactorization>,
        parity: Parity,
        s: PolyMatrix,
        t: PolyMatrix,
    ) -> Result<Self> {
        source.vars().same(target.vars())?;
        let (r, r2) = (source.rank(), target.rank());
        for (name, m) in [("S", &s), ("T", &t)] {
            m.vars().same(source.vars())?;
            if m.rows() != r2 || m.cols() != r {
                return Err(Error::DimensionMismatch(format!(
                    "{name} is {}x{}, expected {r2}x{r}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(MorphismPair {
            source,
            target,
            parity,
            s,
            t,
        })
    }

    pub fn zero(source: Arc<MatrixFactorization>, target: Arc<MatrixFactorization>, parity: Parity) -> Self {
        let z = PolyMatrix::zeros(source.vars(), target.rank(), source.rank());
        Self::new(source, target, parity, z.clone(), z).expect("shapes")
    }

    pub fn identity(m: Arc<MatrixFactorization>) -> Self {
        let one = PolyMatrix::identity(m.vars(), m.rank());
        Self::new(m.clone(), m, Parity::Even, one.clone(), one).expect("shapes")
    }

    /// `Q` as an odd endomorphism.
    pub fn q_operator(m: Arc<MatrixFactorization>) -> Self {
        let (s, t) = (m.phi().clone(), m.psi().clone());
        Self::new(m.clone(), m, Parity::Odd, s, t).expect("shapes")
    }

    /// The even morphism `m → gauge(m)` given by a gauge pair.
    pub fn from_gauge(source: Arc<MatrixFactorization>, target: Arc<MatrixFactorization>, g: &GaugePair) -> Result<Self> {
        Self::new(source, target, Parity::Even, g.s.clone(), g.t.clone())
    }

    pub fn source(&self) -> &Arc<MatrixFactorization> {
        &self.source
    }

    pub fn target(&self) -> &Arc<MatrixFactorization> {
        &self.target
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn s(&self) -> &PolyMatrix {
        &self.s
    }

    pub fn t(&self) -> &PolyMatrix {
        &self.t
    }

    pub fn is_zero(&self) -> bool {
        self.s.is_zero() && self.t.is_zero()
    }

    /// Full `2r' × 2r` block matrix.
    pub fn to_block(&self) -> PolyMatrix {
        let vars = self.source.vars();
        let z = PolyMatrix::zeros(vars, self.target.rank(), self.source.rank());
        match self.parity {
            Parity::Even => PolyMatrix::block(&self.s, &z, &z, &self.t),
            Parity::Odd => PolyMatrix::block(&z, &self.t, &self.s, &z),
        }
        .expect("shapes")
    }

    /// Reads the graded blocks back from a full block matrix. Fails if the
    /// blocks of the other parity are nonzero.
    pub fn from_block(
        source: Arc<MatrixFactorization>,
        target: Arc<MatrixFactorization>,
        parity: Parity,
        f: &PolyMatrix,
    ) -> Result<Self> {
        let (r, r2) = (source.rank(), target.rank());
        if f.rows() != 2 * r2 || f.cols() != 2 * r {
            return Err(Error::DimensionMismatch(format!(
                "block matrix is {}x{}, expected {}x{}",
                f.rows(),
                f.cols(),
                2 * r2,
                2 * r
            )));
        }
        let b00 = f.submatrix(0, r2, 0, r);
        let b01 = f.submatrix(0, r2, r, r);
        let b10 = f.submatrix(r2, r2, 0, r);
        let b11 = f.submatrix(r2, r2, r, r);
        let (s, t, rest) = match parity {
            Parity::Even => (b00, b11, [b01, b10]),
            Parity::Odd => (b10, b01, [b00, b11]),
        };
        if rest.iter().any(|m| !m.is_zero()) {
            return Err(Error::Invalid(format!("block matrix is not homogeneous of {parity} degree")));
        }
        Self::new(source, target, parity, s, t)
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &MorphismPair) -> Result<Self> {
        if other.target != self.source {
            return Err(Error::Invalid("morphisms are not composable".into()));
        }
        let f = self.to_block().mul(&other.to_block())?;
        Self::from_block(other.source.clone(), self.target.clone(), self.parity.add(other.parity), &f)
    }

    pub fn add(&self, other: &MorphismPair) -> Result<Self> {
        if self.source != other.source || self.target != other.target || self.parity != other.parity {
            return Err(Error::Invalid("summands differ in source, target or parity".into()));
        }
        Self::new(
            self.source.clone(),
            self.target.clone(),
            self.parity,
            self.s.add(&other.s)?,
            self.t.add(&other.t)?,
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            s: self.s.scale(c),
            t: self.t.scale(c),
            ..self.clone()
        }
    }

    pub fn scale_poly(&self, h: &Polynomial) -> Self {
        Self {
            s: self.s.scale_poly(h),
            t: self.t.scale_poly(h),
            ..self.clone()
        }
    }

    /// The morphism condition `φ'S = Tφ`, `ψ'T = Sψ` in the even case; in
    /// general `D(f) = 0`.
    pub fn is_closed(&self) -> bool {
        let q2 = self.target.q_matrix();
        let q1 = self.source.q_matrix();
        let f = self.to_block();
        let lhs = q2.mul(&f).expect("shapes");
        let rhs = f.mul(&q1).expect("shapes").scale(&Rational::from_integer(self.parity.sign().into()));
        lhs == rhs
    }

    pub fn with_blocks(&self, s: PolyMatrix, t: PolyMatrix) -> Result<Self> {
        Self::new(self.source.clone(), self.target.clone(), self.parity, s, t)
    }
}

impl fmt::Debug for MorphismPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Morphism({}, S: {}, T: {})", self.parity, self.s, self.t)
    }
}

/// `M_{p,q}`: `φ = diag(x·1_p, y·1_q)`, `ψ = diag(y·1_p, x·1_q)` for `w = xy`.
pub fn mf_xy(p: usize, q: usize) -> Result<MatrixFactorization> {
    if p + q == 0 {
        return Err(Error::ParameterOutOfRange("mf_xy needs p + q >= 1".into()));
    }
    let vars = Vars::new(&["x", "y"])?;
    let x = Polynomial::var(&vars, "x")?;
    let y = Polynomial::var(&vars, "y")?;
    let r = p + q;
    let mut phi = PolyMatrix::zeros(&vars, r, r);
    let mut psi = PolyMatrix::zeros(&vars, r, r);
    for i in 0..r {
        let (a, b) = if i < p { (&x, &y) } else { (&y, &x) };
        phi.set(i, i, a.clone());
        psi.set(i, i, b.clone());
    }
    MatrixFactorization::new(phi, psi, &x * &y)
}

/// Tensor product of the rank-one factorizations `(x_i^{n_i}, x_i^{h_i − n_i})`
/// of `x_i^{h_i}`, in variables `x1, …, xd`.
pub fn mf_brieskorn(pairs: &[(u32, u32)]) -> Result<MatrixFactorization> {
    if pairs.is_empty() {
        return Err(Error::ParameterOutOfRange("at least one factor is required".into()));
    }
    let mut acc: Option<MatrixFactorization> = None;
    for (i, &(n, h)) in pairs.iter().enumerate() {
        if h < 2 || n < 1 || n > h - 1 {
            return Err(Error::ParameterOutOfRange(format!(
                "factor {}: need 2 <= h and 1 <= n <= h - 1, got n = {n}, h = {h}",
                i + 1
            )));
        }
        let vars = Vars::new(&[format!("x{}", i + 1)])?;
        let x = Polynomial::monomial(&vars, crate::poly::Monomial::variable(1, 0), Rational::from_integer(1.into()));
        let phi = PolyMatrix::scalar(&vars, 1, &x.pow(n));
        let psi = PolyMatrix::scalar(&vars, 1, &x.pow(h - n));
        let factor = MatrixFactorization::new(phi, psi, x.pow(h))?;
        acc = Some(match acc {
            None => factor,
            Some(a) => a.tensor(&factor)?,
        });
    }
    Ok(acc.expect("nonempty"))
}
