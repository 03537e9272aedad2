//! The differential on morphism spaces and truncated Ext computation.
//!
//! For factorizations `M`, `M'` of the same potential, the morphisms of
//! parity `P` form a complex under `D(f) = Q'F − (−1)^{|f|} F Q`.
//! [`ext`] computes `Ext^P = ker D / im D` degree by degree: cocycles are
//! the morphisms with entries of degree `≤ d` killed exactly by `D`, and
//! coboundaries are `D(g)` for `g` of degree `≤ d + slack` that land in
//! degree `≤ d`.
//!
//! Both computations share one sparse echelon per parity. Each column is
//! `(D(eⱼ) | tagⱼ)` for a unit morphism `eⱼ`; rows whose pivot lies among
//! the tags are cocycles, and because target coordinates are numbered
//! from high degree to low degree, rows whose pivot has degree `≤ d` span
//! exactly the coboundaries of degree `≤ d`.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::bilinear::{adjoint, BilinearStructure};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::linalg::{Echelon, RationalMatrix, SparseVec};
use crate::matrix::PolyMatrix;
use crate::mf::{GaugePair, MatrixFactorization, MorphismPair, Parity, VerificationReport};
use crate::poly::{tjurina, Monomial, Polynomial, Rational};

/// `D(f) = Q'F − (−1)^{|f|} F Q`, a morphism of the opposite parity.
pub fn differential(f: &MorphismPair) -> Result<MorphismPair> {
    let q_src = f.source().q_matrix();
    let q_tgt = f.target().q_matrix();
    let block = f.to_block();
    let sign = Rational::from_integer(f.parity().sign().into());
    let d = q_tgt.mul(&block)?.sub(&block.mul(&q_src)?.scale(&sign))?;
    MorphismPair::from_block(f.source().clone(), f.target().clone(), f.parity().flip(), &d)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtOptions {
    pub max_degree: u32,
    pub window: u32,
    /// Extra degree allowed for coboundary preimages; defaults to the
    /// largest entry degree of the two operators.
    pub slack: Option<u32>,
    /// Stabilization is not declared below this degree.
    pub min_degree: u32,
}

impl Default for ExtOptions {
    fn default() -> Self {
        ExtOptions {
            max_degree: 12,
            window: 2,
            slack: None,
            min_degree: 0,
        }
    }
}

/// Dimensions observed at one truncation degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtStep {
    pub degree: u32,
    pub dims: (usize, usize),
    pub cocycles: (usize, usize),
    pub coboundaries: (usize, usize),
}

#[derive(Clone, Debug)]
pub struct ExtResult {
    /// `(dim Ext⁰, dim Ext¹)` at the last truncation degree.
    pub dims: (usize, usize),
    /// Cocycle representatives of a basis, indexed by parity.
    pub bases: [Vec<MorphismPair>; 2],
    pub truncation_degree: u32,
    pub stabilized: bool,
    pub history: Vec<ExtStep>,
    /// First degree counted towards stabilization.
    pub start_degree: u32,
    pub window: u32,
    classifiers: [Classifier; 2],
}

impl ExtResult {
    pub fn dim(&self, p: Parity) -> usize {
        match p {
            Parity::Even => self.dims.0,
            Parity::Odd => self.dims.1,
        }
    }

    pub fn basis(&self, p: Parity) -> &[MorphismPair] {
        &self.bases[p.index()]
    }

    /// Coordinates of the class of a cocycle in the basis of its parity.
    /// Fails if `f` is not a cocycle of entry degree within the truncation.
    pub fn classify(&self, f: &MorphismPair) -> Result<Vec<Rational>> {
        self.classifiers[f.parity().index()].classify(f, self.truncation_degree)
    }

    /// Fails with [`Error::NotStabilized`] unless the dimensions stabilized.
    pub fn require_stable(self) -> Result<Self> {
        if self.stabilized {
            Ok(self)
        } else {
            Err(Error::NotStabilized {
                max_degree: self.truncation_degree as usize,
                history: self.history_string(),
            })
        }
    }

    pub fn history_string(&self) -> String {
        self.history
            .iter()
            .map(|s| format!("d={}: ({}, {})", s.degree, s.dims.0, s.dims.1))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

const DEGREE_SHIFT: u32 = 44;
const POS_SHIFT: u32 = 12;
const MAX_DEGREE: u64 = 1023;
const TAG_BASE: usize = 1 << 60;

/// Coordinates of morphisms of one parity: `S` entries then `T` entries,
/// monomials numbered so that higher degree means smaller index.
#[derive(Clone, Debug)]
struct Layout {
    rows: usize,
    cols: usize,
    arity: usize,
}

impl Layout {
    fn entries(&self) -> usize {
        2 * self.rows * self.cols
    }

    fn position(&self, m: &Monomial) -> Result<u64> {
        let radix = u64::from(m.degree()) + 1;
        let mut pos: u64 = 0;
        for &e in m.exponents().iter().rev() {
            pos = pos
                .checked_mul(radix)
                .and_then(|p| p.checked_add(u64::from(e)))
                .filter(|p| *p < 1 << (DEGREE_SHIFT - POS_SHIFT))
                .ok_or_else(|| Error::Invalid("monomial index overflow; degree too large".into()))?;
        }
        Ok(pos)
    }

    fn index(&self, m: &Monomial, entry: usize) -> Result<usize> {
        let k = u64::from(m.degree());
        if k > MAX_DEGREE || entry >= 1 << POS_SHIFT {
            return Err(Error::Invalid("truncation degree or rank too large".into()));
        }
        let idx = ((MAX_DEGREE - k) << DEGREE_SHIFT) | (self.position(m)? << POS_SHIFT) | entry as u64;
        Ok(idx as usize)
    }

    fn degree_of(index: usize) -> u32 {
        (MAX_DEGREE - ((index as u64) >> DEGREE_SHIFT)) as u32
    }

    fn encode(&self, s: &PolyMatrix, t: &PolyMatrix) -> Result<SparseVec> {
        let mut out = Vec::new();
        for (b, m) in [s, t].into_iter().enumerate() {
            for i in 0..self.rows {
                for j in 0..self.cols {
                    let e = b * self.rows * self.cols + i * self.cols + j;
                    for (mono, c) in m.get(i, j).terms() {
                        out.push((self.index(mono, e)?, c.clone()));
                    }
                }
            }
        }
        out.sort_by_key(|(i, _)| *i);
        Ok(out)
    }
}

/// Decomposes cocycles modulo coboundaries in a fixed basis of classes.
#[derive(Clone, Debug)]
struct Classifier {
    layout: Layout,
    echelon: Echelon,
    count: usize,
}

impl Classifier {
    fn classify(&self, f: &MorphismPair, degree: u32) -> Result<Vec<Rational>> {
        if f.s().max_degree().max(f.t().max_degree()) > degree {
            return Err(Error::Invalid(format!(
                "morphism has entries above the truncation degree {degree}"
            )));
        }
        let v = self.layout.encode(f.s(), f.t())?;
        let r = self.echelon.reduce(&v);
        if r.iter().any(|(i, _)| *i < TAG_BASE) {
            return Err(Error::Invalid("morphism is not a cocycle in the computed range".into()));
        }
        let mut out = vec![Rational::zero(); self.count];
        for (i, c) in r {
            out[i - TAG_BASE] = -c;
        }
        Ok(out)
    }
}

/// Incremental elimination of `(D(eⱼ) | tagⱼ)` over unit morphisms of one
/// parity, added in order of increasing degree.
struct Engine {
    parity: Parity,
    source_layout: Layout,
    target_layout: Layout,
    unknowns: Vec<(Monomial, usize)>,
    echelon: Echelon,
    /// Cocycles found so far, as `(degree, vector over unknowns)`.
    kernel: Vec<(u32, SparseVec)>,
    filled_to: Option<u32>,
}

impl Engine {
    fn new(parity: Parity, r_src: usize, r_tgt: usize, arity: usize) -> Self {
        let layout = Layout {
            rows: r_tgt,
            cols: r_src,
            arity,
        };
        Engine {
            parity,
            source_layout: layout.clone(),
            target_layout: layout,
            unknowns: Vec::new(),
            echelon: Echelon::new(),
            kernel: Vec::new(),
            filled_to: None,
        }
    }

    fn fill(&mut self, upto: u32, ctx: &Context, budget: &Budget) -> Result<()> {
        let start = self.filled_to.map_or(0, |d| d + 1);
        for k in start..=upto {
            for mono in Monomial::all_of_degree(self.source_layout.arity, k) {
                for e in 0..self.source_layout.entries() {
                    budget.charge(1)?;
                    let j = self.unknowns.len();
                    self.unknowns.push((mono.clone(), e));
                    let mut v = ctx.unit_differential(self.parity, &mono, e, &self.target_layout)?;
                    v.push((TAG_BASE + j, Rational::one()));
                    let r = self.echelon.reduce(&v);
                    if let Some((p, _)) = r.first() {
                        if *p >= TAG_BASE {
                            self.kernel.push((k, r.iter().map(|(i, c)| (i - TAG_BASE, c.clone())).collect()));
                        }
                        self.echelon.insert(&r);
                    }
                }
            }
            self.filled_to = Some(k);
        }
        Ok(())
    }

    fn cocycle_count(&self, d: u32) -> usize {
        self.kernel.iter().filter(|(k, _)| *k <= d).count()
    }

    /// Rows spanning the image of `D` inside target degree `≤ d`, restricted
    /// to their target coordinates.
    fn coboundary_rows(&self, d: u32) -> Vec<SparseVec> {
        self.echelon
            .rows()
            .filter(|r| {
                let p = r[0].0;
                p < TAG_BASE && Layout::degree_of(p) <= d
            })
            .map(|r| r.iter().filter(|(i, _)| *i < TAG_BASE).cloned().collect())
            .collect()
    }

    fn coboundary_count(&self, d: u32) -> usize {
        self.echelon
            .pivots()
            .filter(|&p| p < TAG_BASE && Layout::degree_of(p) <= d)
            .count()
    }

    /// Cocycles of degree `≤ d` in source-layout coordinates.
    fn cocycles(&self, d: u32) -> Result<Vec<SparseVec>> {
        self.kernel
            .iter()
            .filter(|(k, _)| *k <= d)
            .map(|(_, v)| {
                let mut out: SparseVec = v
                    .iter()
                    .map(|(j, c)| {
                        let (m, e) = &self.unknowns[*j];
                        Ok((self.source_layout.index(m, *e)?, c.clone()))
                    })
                    .collect::<Result<_>>()?;
                out.sort_by_key(|(i, _)| *i);
                Ok(out)
            })
            .collect()
    }
}

/// Sparse copies of the two operators, for fast unit differentials.
struct Context {
    src: Arc<MatrixFactorization>,
    tgt: Arc<MatrixFactorization>,
    q_src: PolyMatrix,
    q_tgt: PolyMatrix,
}

impl Context {
    /// Full-block position of entry `e` of a morphism of parity `p`.
    fn position(p: Parity, rows: usize, cols: usize, e: usize) -> (usize, usize) {
        let block = e / (rows * cols);
        let (i, j) = ((e % (rows * cols)) / cols, e % cols);
        match (p, block) {
            (Parity::Even, 0) => (i, j),
            (Parity::Even, _) => (rows + i, cols + j),
            (Parity::Odd, 0) => (rows + i, j),
            (Parity::Odd, _) => (i, cols + j),
        }
    }

    /// Entry index of a full-block position for parity `p`, if it belongs.
    fn entry(p: Parity, rows: usize, cols: usize, a: usize, b: usize) -> Option<usize> {
        let (lo_a, lo_b) = (a < rows, b < cols);
        let (i, j) = (a % rows, b % cols);
        let n = rows * cols;
        match (p, lo_a, lo_b) {
            (Parity::Even, true, true) => Some(i * cols + j),
            (Parity::Even, false, false) => Some(n + i * cols + j),
            (Parity::Odd, false, true) => Some(i * cols + j),
            (Parity::Odd, true, false) => Some(n + i * cols + j),
            _ => None,
        }
    }

    /// `D(μ·E_e)` for the unit morphism of parity `p`, encoded in the
    /// layout of the opposite parity.
    fn unit_differential(&self, p: Parity, mono: &Monomial, e: usize, layout: &Layout) -> Result<SparseVec> {
        let (rows, cols) = (self.tgt.rank(), self.src.rank());
        let (a, b) = Self::position(p, rows, cols, e);
        let sign = Rational::from_integer(p.sign().into());
        let mut acc: std::collections::BTreeMap<usize, Rational> = std::collections::BTreeMap::new();
        let out_parity = p.flip();
        let mut add = |row: usize, col: usize, poly: &Polynomial, scale: &Rational| -> Result<()> {
            let idx = Self::entry(out_parity, rows, cols, row, col).expect("differential flips parity");
            for (m, c) in poly.terms() {
                let key = layout.index(&m.mul(mono), idx)?;
                let v = acc.entry(key).or_insert_with(Rational::zero);
                *v += c * scale;
            }
            Ok(())
        };
        let one = Rational::one();
        // Q'F: column b of the result is Q'[:, a]·μ
        for k in 0..2 * rows {
            let q = self.q_tgt.get(k, a);
            if !q.is_zero() {
                add(k, b, q, &one)?;
            }
        }
        // −σ F Q: row a of the result is μ·Q[b, :]
        let neg_sign = -sign;
        for l in 0..2 * cols {
            let q = self.q_src.get(b, l);
            if !q.is_zero() {
                add(a, l, q, &neg_sign)?;
            }
        }
        Ok(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }

    fn decode(&self, p: Parity, layout: &Layout, v: &SparseVec) -> Result<MorphismPair> {
        let vars = self.src.vars();
        let (rows, cols) = (layout.rows, layout.cols);
        let mut s = PolyMatrix::zeros(vars, rows, cols);
        let mut t = PolyMatrix::zeros(vars, rows, cols);
        // invert the layout by scanning candidate monomials lazily
        let max_k = v.iter().map(|(i, _)| Layout::degree_of(*i)).max().unwrap_or(0);
        let mut lookup = std::collections::HashMap::new();
        for k in 0..=max_k {
            for m in Monomial::all_of_degree(layout.arity, k) {
                let key = layout.index(&m, 0)?;
                lookup.insert(key, m);
            }
        }
        let mask = (1usize << POS_SHIFT) - 1;
        for (i, c) in v {
            let e = i & mask;
            let m = &lookup[&(i & !mask)];
            let block = e / (rows * cols);
            let (r, cc) = ((e % (rows * cols)) / cols, e % cols);
            let target = if block == 0 { &mut s } else { &mut t };
            let cur = target.get(r, cc).clone();
            target.set(r, cc, &cur + &Polynomial::monomial(vars, m.clone(), c.clone()));
        }
        MorphismPair::new(self.src.clone(), self.tgt.clone(), p, s, t)
    }
}

/// Truncated `Ext(M, M')` with stabilization detection.
///
/// Degrees below the largest entry degree of the operators are computed
/// but do not count towards stabilization: before that point low-degree
/// cocycles may not yet meet the coboundaries that kill them.
pub fn ext(
    m: &Arc<MatrixFactorization>,
    m2: &Arc<MatrixFactorization>,
    options: &ExtOptions,
    budget: &Budget,
) -> Result<ExtResult> {
    m.vars().same(m2.vars())?;
    if m.potential() != m2.potential() {
        return Err(Error::PotentialMismatch {
            left: m.potential().to_string(),
            right: m2.potential().to_string(),
        });
    }
    let (_, mu) = tjurina(m.potential())?;
    if mu.is_none() {
        return Err(Error::NonIsolated(m.potential().to_string()));
    }
    if options.window == 0 {
        return Err(Error::ParameterOutOfRange("window must be at least 1".into()));
    }
    let ctx = Context {
        src: m.clone(),
        tgt: m2.clone(),
        q_src: m.q_matrix(),
        q_tgt: m2.q_matrix(),
    };
    let start_degree = m.max_degree().max(m2.max_degree());
    let slack = options.slack.unwrap_or(start_degree);
    let arity = m.vars().len();
    let mut engines = [
        Engine::new(Parity::Even, m.rank(), m2.rank(), arity),
        Engine::new(Parity::Odd, m.rank(), m2.rank(), arity),
    ];
    let mut history: Vec<ExtStep> = Vec::new();
    let mut stabilized = false;
    let mut degree = 0;
    for d in 0..=options.max_degree {
        degree = d;
        for e in engines.iter_mut() {
            e.fill(d + slack, &ctx, budget)?;
        }
        // coboundaries of parity P come from the engine of the other parity
        let z = (engines[0].cocycle_count(d), engines[1].cocycle_count(d));
        let b = (engines[1].coboundary_count(d), engines[0].coboundary_count(d));
        history.push(ExtStep {
            degree: d,
            dims: (z.0 - b.0, z.1 - b.1),
            cocycles: z,
            coboundaries: b,
        });
        let w = options.window as usize;
        if history.len() >= w {
            let tail = &history[history.len() - w..];
            if tail[0].degree >= start_degree.max(options.min_degree) && tail.iter().all(|s| s.dims == tail[0].dims) {
                stabilized = true;
                break;
            }
        }
    }
    let mut bases: [Vec<MorphismPair>; 2] = [Vec::new(), Vec::new()];
    let mut classifiers = Vec::new();
    for p in [Parity::Even, Parity::Odd] {
        let own = &engines[p.index()];
        let other = &engines[p.flip().index()];
        let mut ech = Echelon::new();
        for row in other.coboundary_rows(degree) {
            ech.insert(&row);
        }
        let mut reps = Vec::new();
        for z in own.cocycles(degree)? {
            let r = ech.reduce(&z);
            if r.iter().any(|(i, _)| *i < TAG_BASE) {
                let mut tagged = z.clone();
                tagged.push((TAG_BASE + reps.len(), Rational::one()));
                ech.insert(&tagged);
                reps.push(ctx.decode(p, &own.source_layout, &z)?);
            }
        }
        classifiers.push(Classifier {
            layout: own.source_layout.clone(),
            echelon: ech,
            count: reps.len(),
        });
        bases[p.index()] = reps;
    }
    let last = history.last().expect("at least one degree").dims;
    debug_assert_eq!(last, (bases[0].len(), bases[1].len()));
    let classifiers: [Classifier; 2] = classifiers.try_into().expect("two parities");
    Ok(ExtResult {
        dims: last,
        bases,
        truncation_degree: degree,
        stabilized,
        history,
        start_degree,
        window: options.window,
        classifiers,
    })
}

/// Dimensions of the `±1` eigenspaces of the adjoint on `Ext`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjointSplit {
    /// `(plus, minus)` for `Ext⁰`.
    pub even: (usize, usize),
    /// `(plus, minus)` for `Ext¹`.
    pub odd: (usize, usize),
    pub stabilized: bool,
    pub truncation_degree: u32,
}

/// Matrix of `f ↦ f^adj` on the Ext basis of parity `p` (columns are the
/// images of basis vectors).
pub fn adjoint_matrix(e: &ExtResult, b: &BilinearStructure, p: Parity) -> Result<RationalMatrix> {
    let basis = e.basis(p);
    let n = basis.len();
    let mut a = RationalMatrix::zeros(n, n);
    for (j, f) in basis.iter().enumerate() {
        let g = adjoint(f, b, b)?;
        debug_assert!(g.is_closed(), "adjoint of a cocycle must be a cocycle");
        let coords = e.classify(&g)?;
        for (i, c) in coords.into_iter().enumerate() {
            a.set(i, j, c);
        }
    }
    Ok(a)
}

fn eigen_dims(a: &RationalMatrix) -> Result<(usize, usize)> {
    let n = a.rows();
    let id = RationalMatrix::identity(n);
    let shifted = |s: i64| {
        let mut m = a.clone();
        for i in 0..n {
            for j in 0..n {
                let v = a.get(i, j) - id.get(i, j) * Rational::from_integer(s.into());
                m.set(i, j, v);
            }
        }
        m
    };
    let plus = n - shifted(1).rank();
    let minus = n - shifted(-1).rank();
    if plus + minus != n {
        return Err(Error::Invalid(format!(
            "adjoint is not an involution on Ext: eigenspaces {plus} + {minus} != {n}"
        )));
    }
    Ok((plus, minus))
}

/// Splits `Ext(M, M)` into selfadjoint and anti-selfadjoint parts.
pub fn ext_adjoint_split(b: &BilinearStructure, options: &ExtOptions, budget: &Budget) -> Result<(ExtResult, AdjointSplit)> {
    let m = b.host().clone();
    let e = ext(&m, &m, options, budget)?;
    let even = eigen_dims(&adjoint_matrix(&e, b, Parity::Even)?)?;
    let odd = eigen_dims(&adjoint_matrix(&e, b, Parity::Odd)?)?;
    let split = AdjointSplit {
        even,
        odd,
        stabilized: e.stabilized,
        truncation_degree: e.truncation_degree,
    };
    Ok((e, split))
}

/// Checks that `f: M → M'`, `g: M' → M` are inverse homotopy equivalences
/// with homotopies `h` on `M` and `h2` on `M'`:
/// `D f = 0`, `D g = 0`, `g f − 1 = D h`, `f g − 1 = D h2`.
pub fn verify_equivalence_witness(
    f: &MorphismPair,
    g: &MorphismPair,
    h: &MorphismPair,
    h2: &MorphismPair,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::default();
    for (name, x, parity) in [
        ("f even", f, Parity::Even),
        ("g even", g, Parity::Even),
        ("h odd", h, Parity::Odd),
        ("h' odd", h2, Parity::Odd),
    ] {
        if x.parity() != parity {
            report.push(name, format!("has parity {}", x.parity()));
        }
    }
    if !report.is_valid() {
        return Ok(report);
    }
    let df = differential(f)?;
    report.require_zero("D(f) = 0", &df.to_block());
    let dg = differential(g)?;
    report.require_zero("D(g) = 0", &dg.to_block());
    let gf = g.compose(f)?;
    let id_m = MorphismPair::identity(f.source().clone());
    let lhs = gf.to_block().sub(&id_m.to_block())?;
    report.require_zero("g*f - 1 = D(h)", &lhs.sub(&differential(h)?.to_block())?);
    let fg = f.compose(g)?;
    let id_m2 = MorphismPair::identity(f.target().clone());
    let lhs = fg.to_block().sub(&id_m2.to_block())?;
    report.require_zero("f*g - 1 = D(h')", &lhs.sub(&differential(h2)?.to_block())?);
    Ok(report)
}

/// Searches for a constant gauge pair `(S, T)` with `gauge(M) = M'`, i.e.
/// an even cocycle `M → M'` with constant invertible blocks.
pub fn find_isomorphism(m: &Arc<MatrixFactorization>, m2: &Arc<MatrixFactorization>) -> Result<Option<GaugePair>> {
    if m.rank() != m2.rank() || m.potential() != m2.potential() {
        return Ok(None);
    }
    m.vars().same(m2.vars())?;
    let ctx = Context {
        src: m.clone(),
        tgt: m2.clone(),
        q_src: m.q_matrix(),
        q_tgt: m2.q_matrix(),
    };
    let mut engine = Engine::new(Parity::Even, m.rank(), m2.rank(), m.vars().len());
    engine.fill(0, &ctx, &Budget::unlimited())?;
    let basis: Vec<MorphismPair> = engine
        .cocycles(0)?
        .iter()
        .map(|v| ctx.decode(Parity::Even, &engine.source_layout, v))
        .collect::<Result<_>>()?;
    let n = basis.len();
    let mut trials: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for shift in 1..=n as i64 + 2 {
        trials.push((0..n as i64).map(|j| 1 + (j * shift) % (n as i64 + 3)).collect());
    }
    for coeffs in trials {
        let mut s = PolyMatrix::zeros(m.vars(), m.rank(), m.rank());
        let mut t = s.clone();
        for (c, f) in coeffs.iter().zip(&basis) {
            let c = Rational::from_integer((*c).into());
            s = s.add(&f.s().scale(&c))?;
            t = t.add(&f.t().scale(&c))?;
        }
        if let Ok(g) = GaugePair::new(s, t) {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mf::{mf_brieskorn, mf_xy};

    fn opts() -> ExtOptions {
        ExtOptions::default()
    }

    #[test]
    fn differential_basics() {
        let m = Arc::new(mf_xy(1, 1).unwrap());
        assert!(differential(&MorphismPair::identity(m.clone())).unwrap().is_zero());
        let q = MorphismPair::q_operator(m.clone());
        let dq = differential(&q).unwrap();
        let two_w = m.potential().scale(&Rational::from_integer(2.into()));
        assert_eq!(dq.s(), &PolyMatrix::scalar(m.vars(), 2, &two_w));
        assert_eq!(dq.t(), &PolyMatrix::scalar(m.vars(), 2, &two_w));
    }

    #[test]
    fn ext_of_node() {
        let m = Arc::new(mf_xy(1, 0).unwrap());
        let e = ext(&m, &m, &opts(), &Budget::unlimited()).unwrap();
        assert_eq!(e.dims, (1, 0));
        assert!(e.stabilized);
        for f in e.bases.iter().flatten() {
            assert!(f.is_closed());
        }
        let id = MorphismPair::identity(m.clone());
        assert_eq!(e.classify(&id).unwrap().len(), 1);
    }

    #[test]
    fn ext_of_node_pair_and_a2() {
        let m = Arc::new(mf_xy(1, 1).unwrap());
        let e = ext(&m, &m, &opts(), &Budget::unlimited()).unwrap();
        assert_eq!(e.dims, (2, 2));
        let a = Arc::new(mf_brieskorn(&[(1, 3)]).unwrap());
        let e = ext(&a, &a, &opts(), &Budget::unlimited()).unwrap();
        assert_eq!(e.dims, (1, 1));
        assert!(e.stabilized);
    }

    #[test]
    fn mixed_and_rejected_inputs() {
        let a = Arc::new(mf_xy(1, 0).unwrap());
        let b = Arc::new(mf_xy(0, 1).unwrap());
        let e = ext(&a, &b, &opts(), &Budget::unlimited()).unwrap();
        assert_eq!(e.dims, (0, 1));
        let c = Arc::new(MatrixFactorization::parse(a.vars(), &[&["x"]], &[&["x"]], "x^2").unwrap());
        assert!(matches!(ext(&a, &c, &opts(), &Budget::unlimited()), Err(Error::PotentialMismatch { .. })));
        let v = crate::poly::Vars::new(&["x", "y"]).unwrap();
        let nonisolated = Arc::new(MatrixFactorization::parse(&v, &[&["x"]], &[&["x*y^2"]], "x^2*y^2").unwrap());
        assert!(matches!(
            ext(&nonisolated, &nonisolated, &opts(), &Budget::unlimited()),
            Err(Error::NonIsolated(_))
        ));
        assert!(matches!(ext(&a, &a, &opts(), &Budget::new(3)), Err(Error::BudgetExhausted(3))));
    }

    #[test]
    fn identity_witness_and_node_isomorphism() {
        let m = Arc::new(mf_xy(1, 1).unwrap());
        let id = MorphismPair::identity(m.clone());
        let z = MorphismPair::zero(m.clone(), m.clone(), Parity::Odd);
        assert!(verify_equivalence_witness(&id, &id, &z, &z).unwrap().is_valid());
        let shifted = Arc::new(mf_xy(1, 1).unwrap().shift());
        let g = find_isomorphism(&m, &shifted).unwrap().unwrap();
        assert_eq!(m.gauge(&g, 0).unwrap().mf, *shifted);
    }
}
