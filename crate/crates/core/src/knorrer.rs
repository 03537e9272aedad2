//! The Knörrer functor: from a factorization `(P, Q)` of `π` to the
//! factorization of `xy − π` with blocks `[[x, P], [Q, y]]` and
//! `[[y, −P], [−Q, x]]`, the transport of bilinear structures, the square
//! of the functor, and the versal family of the node.

use std::sync::Arc;

use num_traits::Zero;

use crate::bilinear::{BilinearStructure, Sign, StructureKind};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::matrix::PolyMatrix;
use crate::mf::{GaugePair, MatrixFactorization};
use crate::poly::{Ideal, MonomialOrder, Polynomial, QuotientRing, Rational, Vars};

#[derive(Clone, Debug)]
pub struct KnorrerOutput {
    pub result: MatrixFactorization,
    /// The fresh variables, in the order they were introduced.
    pub new_variables: Vec<String>,
    pub structure: Option<BilinearStructure>,
    /// Human-readable record of what was applied, including any
    /// normalizing substitution.
    pub provenance: String,
}

fn fresh_vars(m: &MatrixFactorization, names: &[&str]) -> Result<Vars> {
    for n in names {
        if m.vars().contains(n) {
            return Err(Error::VariableCollision((*n).to_string()));
        }
    }
    m.vars().extend(names)
}

fn theta_blocks(p: &PolyMatrix, q: &PolyMatrix, x: &Polynomial, y: &Polynomial) -> Result<(PolyMatrix, PolyMatrix)> {
    let vars = p.vars();
    let r = p.rows();
    let xs = PolyMatrix::scalar(vars, r, x);
    let ys = PolyMatrix::scalar(vars, r, y);
    let phi = PolyMatrix::block(&xs, p, q, &ys)?;
    let psi = PolyMatrix::block(&ys, &p.neg(), &q.neg(), &xs)?;
    Ok((phi, psi))
}

/// `θ(M)` for fresh variables `x`, `y` appended after those of `M`.
pub fn theta(m: &MatrixFactorization, x: &str, y: &str) -> Result<KnorrerOutput> {
    let vars = fresh_vars(m, &[x, y])?;
    let p = m.phi().embed(&vars)?;
    let q = m.psi().embed(&vars)?;
    let (xv, yv) = (Polynomial::var(&vars, x)?, Polynomial::var(&vars, y)?);
    let (phi, psi) = theta_blocks(&p, &q, &xv, &yv)?;
    let w = &(&xv * &yv) - &m.potential().embed(&vars)?;
    let result = MatrixFactorization::new(phi, psi, w)?;
    Ok(KnorrerOutput {
        result,
        new_variables: vec![x.to_string(), y.to_string()],
        structure: None,
        provenance: format!("theta with new variables {x} {y}"),
    })
}

/// The structure on `θ(M)` induced by `B` and the quadratic form of the
/// node `(x, y)`.
///
/// A twisted structure `(q₀, q₁)` of sign `ε` becomes the untwisted one
/// `b₀ = diag(q₁, q₀)`, `b₁ = −b₀` of sign `ε`; an untwisted `(b₀, b₁)`
/// of sign `ε` becomes the twisted one `q₀ = q₁ = [[0, b₀], [b₁, 0]]` of
/// sign `−ε`.
pub fn theta_structure(out: &KnorrerOutput, b: &BilinearStructure) -> Result<BilinearStructure> {
    let host = Arc::new(out.result.clone());
    let vars = host.vars().clone();
    if 2 * b.host().rank() != host.rank() {
        return Err(Error::DimensionMismatch(format!(
            "structure has rank {}, factorization has rank {}",
            b.host().rank(),
            host.rank()
        )));
    }
    let b0 = b.b0().embed(&vars)?;
    let b1 = b.b1().embed(&vars)?;
    let s = match b.kind() {
        StructureKind::Twisted => {
            let d = PolyMatrix::block_diag(&b1, &b0)?;
            BilinearStructure::new(host, StructureKind::Untwisted, b.sign(), d.clone(), d.neg())?
        }
        StructureKind::Untwisted => {
            let z = PolyMatrix::zeros(&vars, b0.rows(), b0.cols());
            let c = PolyMatrix::block(&z, &b0, &b1, &z)?;
            BilinearStructure::new(host, StructureKind::Twisted, b.sign().negate(), c.clone(), c)?
        }
    };
    Ok(s)
}

/// `θ(M)` together with the transported structure, which is checked.
pub fn theta_with_structure(b: &BilinearStructure, x: &str, y: &str) -> Result<KnorrerOutput> {
    let mut out = theta(b.host(), x, y)?;
    let s = theta_structure(&out, b)?;
    let report = s.verify();
    if !report.is_valid() {
        return Err(Error::Construction(format!("transported structure fails: {}", report.violations[0])));
    }
    out.provenance = format!("{}; structure {} {} -> {} {}", out.provenance, b.kind(), b.sign(), s.kind(), s.sign());
    out.structure = Some(s);
    Ok(out)
}

/// `θθ(M)` presented as a factorization of `xy + uv − π`.
///
/// Applying `θ` twice gives the potential `uv − xy + π`. Negating `ψ`
/// turns it into `xy − uv − π`, and the substitution `u ↦ −u` then gives
/// `xy + uv − π`. Both steps preserve any structure (its conditions are
/// linear in `ψ`), so an untwisted structure of sign `ε` ends up untwisted
/// of sign `−ε`.
pub fn theta_squared(
    m: &MatrixFactorization,
    b: Option<&BilinearStructure>,
    names: [&str; 4],
) -> Result<KnorrerOutput> {
    let [x, y, u, v] = names;
    fresh_vars(m, &names)?;
    let (first, second) = match b {
        Some(b) => {
            let first = theta_with_structure(b, x, y)?;
            let s = first.structure.clone().expect("structure was requested");
            let second = theta_with_structure(&s, u, v)?;
            (first, second)
        }
        None => {
            let first = theta(m, x, y)?;
            let second = theta(&first.result, u, v)?;
            (first, second)
        }
    };
    let u_index = second.result.vars().index_of(u).expect("u was introduced");
    let result = second.result.negate_potential().negate_variable(u_index);
    let structure = match &second.structure {
        Some(s) => {
            let host = Arc::new(result.clone());
            let s = BilinearStructure::new(
                host,
                s.kind(),
                s.sign(),
                s.b0().negate_variable(u_index),
                s.b1().negate_variable(u_index),
            )?;
            let report = s.verify();
            if !report.is_valid() {
                return Err(Error::Construction(format!("normalized structure fails: {}", report.violations[0])));
            }
            Some(s)
        }
        None => None,
    };
    let mut provenance = format!(
        "{}; {}; normalized by psi -> -psi and {u} -> -{u}",
        first.provenance, second.provenance
    );
    if let (Some(b), Some(s)) = (b, &structure) {
        provenance = format!("{provenance}; structure {} {} -> {} {}", b.kind(), b.sign(), s.kind(), s.sign());
    }
    Ok(KnorrerOutput {
        result,
        new_variables: names.iter().map(|s| s.to_string()).collect(),
        structure,
        provenance,
    })
}

/// Gauge pair on `θ(M)` induced by a gauge pair `(S, T)` on `M`: both
/// blocks are `diag(T, S)`, so `θ(gauge(M)) = gauge(θ(M))`.
pub fn theta_gauge(g: &GaugePair, vars: &Vars) -> Result<GaugePair> {
    let d = PolyMatrix::block_diag(&g.t.embed(vars)?, &g.s.embed(vars)?)?;
    GaugePair::new(d.clone(), d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VersalMode {
    Plain,
    /// `Q` is the adjoint of `P` for the standard quadratic form.
    Orthogonal,
    /// `Q` is the adjoint of `P` for the standard symplectic form.
    Symplectic,
}

impl std::str::FromStr for VersalMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(VersalMode::Plain),
            "orthogonal" => Ok(VersalMode::Orthogonal),
            "symplectic" => Ok(VersalMode::Symplectic),
            _ => Err(Error::Invalid(format!("unknown versal mode `{s}`"))),
        }
    }
}

impl std::fmt::Display for VersalMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            VersalMode::Plain => "plain",
            VersalMode::Orthogonal => "orthogonal",
            VersalMode::Symplectic => "symplectic",
        })
    }
}

/// One entry of `φψ − (xy − t)·1` or `ψφ − (xy − t)·1` and its normal form
/// modulo the base relations.
#[derive(Clone, Debug)]
pub struct CertificateEntry {
    pub product: &'static str,
    pub row: usize,
    pub col: usize,
    pub entry: Polynomial,
    pub reduced: Polynomial,
}

#[derive(Clone, Debug)]
pub struct VersalFamily {
    pub rank: usize,
    pub mode: VersalMode,
    pub vars: Vars,
    /// Variables of the base: `t` and the free entries of `P` and `Q`.
    pub base_vars: Vec<String>,
    pub p: PolyMatrix,
    pub q: PolyMatrix,
    pub phi: PolyMatrix,
    pub psi: PolyMatrix,
    pub potential: Polynomial,
    /// Entries of `PQ − t·1` and `QP − t·1`.
    pub relations: Vec<Polynomial>,
    pub base: QuotientRing,
    pub certificate: Vec<CertificateEntry>,
    /// `dim m/(m² + I)` for the base ideal `I`.
    pub base_tangent_dim: usize,
}

impl VersalFamily {
    pub fn certified(&self) -> bool {
        self.certificate.iter().all(|c| c.reduced.is_zero())
    }
}

/// The family `θ(P, Q)` over `ℚ[t, P, Q]/(PQ − t·1, QP − t·1)` deforming
/// `mf_xy(r, r)`, for `r ∈ {1, 2}`.
pub fn versal_family(r: usize, mode: VersalMode, budget: &Budget) -> Result<VersalFamily> {
    if !(1..=2).contains(&r) {
        return Err(Error::ParameterOutOfRange(format!("versal family rank must be 1 or 2, got {r}")));
    }
    if mode == VersalMode::Symplectic && r % 2 == 1 {
        return Err(Error::ParameterOutOfRange("symplectic mode needs even rank".into()));
    }
    let entry_names = |c: char| -> Vec<String> {
        (0..r)
            .flat_map(|i| (0..r).map(move |j| format!("{c}{}{}", i + 1, j + 1)))
            .collect()
    };
    let mut base_vars = vec!["t".to_string()];
    base_vars.extend(entry_names('p'));
    if mode == VersalMode::Plain {
        base_vars.extend(entry_names('q'));
    }
    let mut all = base_vars.clone();
    all.extend(["x".to_string(), "y".to_string()]);
    let vars = Vars::new(&all)?;
    let generic = |c: char| -> Result<PolyMatrix> {
        let names = entry_names(c);
        let rows = (0..r)
            .map(|i| (0..r).map(|j| Polynomial::var(&vars, &names[i * r + j])).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        PolyMatrix::from_rows(&vars, rows)
    };
    let p = generic('p')?;
    let q = match mode {
        VersalMode::Plain => generic('q')?,
        VersalMode::Orthogonal => p.transpose(),
        VersalMode::Symplectic => {
            // J = [[0, 1], [−1, 0]] blockwise, J⁻¹ = −J
            let h = r / 2;
            let one = PolyMatrix::identity(&vars, h);
            let z = PolyMatrix::zeros(&vars, h, h);
            let j = PolyMatrix::block(&z, &one, &one.neg(), &z)?;
            j.neg().mul(&p.transpose())?.mul(&j)?
        }
    };
    let t = Polynomial::var(&vars, "t")?;
    let x = Polynomial::var(&vars, "x")?;
    let y = Polynomial::var(&vars, "y")?;
    let (phi, psi) = theta_blocks(&p, &q, &x, &y)?;
    let potential = &(&x * &y) - &t;
    let t_id = PolyMatrix::scalar(&vars, r, &t);
    let mut relations = Vec::new();
    for m in [p.mul(&q)?.sub(&t_id)?, q.mul(&p)?.sub(&t_id)?] {
        for e in m.entries() {
            if !e.is_zero() && !relations.contains(e) {
                relations.push(e.clone());
            }
        }
    }
    let base = Ideal::new(&vars, relations.clone(), MonomialOrder::Block { first: 1 })?.groebner_with_budget(budget)?;
    let w_id = PolyMatrix::scalar(&vars, 2 * r, &potential);
    let mut certificate = Vec::new();
    for (name, prod) in [("phi*psi", phi.mul(&psi)?), ("psi*phi", psi.mul(&phi)?)] {
        let diff = prod.sub(&w_id)?;
        for i in 0..2 * r {
            for j in 0..2 * r {
                let entry = diff.get(i, j).clone();
                let reduced = base.normal_form(&entry)?;
                certificate.push(CertificateEntry {
                    product: name,
                    row: i,
                    col: j,
                    entry,
                    reduced,
                });
            }
        }
    }
    let base_tangent_dim = base_vars.len() - linear_part_rank(&relations, base_vars.len());
    Ok(VersalFamily {
        rank: r,
        mode,
        vars,
        base_vars,
        p,
        q,
        phi,
        psi,
        potential,
        relations,
        base,
        certificate,
        base_tangent_dim,
    })
}

/// Rank of the linear parts of the generators in the first `n` variables.
fn linear_part_rank(gens: &[Polynomial], n: usize) -> usize {
    let rows: Vec<Vec<Rational>> = gens
        .iter()
        .map(|g| {
            let mut row = vec![Rational::zero(); n];
            for (m, c) in g.terms() {
                if m.degree() == 1 {
                    let i = m.exponents().iter().position(|&e| e == 1).expect("degree one");
                    if i < n {
                        row[i] = c.clone();
                    }
                }
            }
            row
        })
        .collect();
    if rows.is_empty() {
        return 0;
    }
    crate::linalg::RationalMatrix::from_rows(rows).map(|m| m.rank()).unwrap_or(0)
}

/// The sign of a structure after `θ`, as a pair `(kind, sign)`.
pub fn theta_type(kind: StructureKind, sign: Sign) -> (StructureKind, Sign) {
    match kind {
        StructureKind::Twisted => (StructureKind::Untwisted, sign),
        StructureKind::Untwisted => (StructureKind::Twisted, sign.negate()),
    }
}
