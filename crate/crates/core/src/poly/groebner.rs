use std::collections::BTreeSet;

use num_traits::{One, Zero};

use super::{Monomial, MonomialOrder, Polynomial, Rational, Vars};
use crate::budget::Budget;
use crate::error::{Error, Result};

/// A polynomial ideal given by generators and a monomial order.
#[derive(Debug, Clone, PartialEq)]
pub struct Ideal {
    vars: Vars,
    generators: Vec<Polynomial>,
    order: MonomialOrder,
}

impl Ideal {
    /// Zero generators are dropped; all generators must share `vars`.
    pub fn new(vars: &Vars, generators: Vec<Polynomial>, order: MonomialOrder) -> Result<Self> {
        for g in &generators {
            vars.same(g.vars())?;
        }
        Ok(Ideal {
            vars: vars.clone(),
            generators: generators.into_iter().filter(|g| !g.is_zero()).collect(),
            order,
        })
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn groebner(&self) -> QuotientRing {
        self.groebner_with_budget(&Budget::unlimited())
            .expect("unlimited budget cannot be exhausted")
    }

    pub fn groebner_with_budget(&self, budget: &Budget) -> Result<QuotientRing> {
        let basis = buchberger(&self.generators, &self.order, budget)?;
        let monomial_basis = standard_monomials(&self.vars, &basis, &self.order);
        Ok(QuotientRing {
            ideal: self.clone(),
            groebner: basis,
            monomial_basis,
        })
    }
}

/// `k[x]/I` presented by a reduced Gröbner basis of `I`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientRing {
    ideal: Ideal,
    groebner: Vec<Polynomial>,
    monomial_basis: Option<Vec<Monomial>>,
}

impl QuotientRing {
    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn vars(&self) -> &Vars {
        &self.ideal.vars
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.ideal.order
    }

    /// Reduced, monic, sorted by decreasing leading monomial.
    pub fn groebner_basis(&self) -> &[Polynomial] {
        &self.groebner
    }

    /// Standard monomials in increasing degrevlex order, or `None` when the
    /// quotient is infinite-dimensional.
    pub fn monomial_basis(&self) -> Option<&[Monomial]> {
        self.monomial_basis.as_deref()
    }

    pub fn dimension(&self) -> Option<usize> {
        self.monomial_basis.as_ref().map(Vec::len)
    }

    pub fn is_finite(&self) -> bool {
        self.monomial_basis.is_some()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.groebner
            .iter()
            .map(|g| g.leading_term(&self.ideal.order).expect("nonzero").0.clone())
            .collect()
    }

    pub fn normal_form(&self, p: &Polynomial) -> Result<Polynomial> {
        self.ideal.vars.same(p.vars())?;
        Ok(reduce(p, &self.groebner, &self.ideal.order))
    }

    pub fn contains(&self, p: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(p)?.is_zero())
    }

    /// Coordinates of the normal form of `p` in the monomial basis.
    pub fn coordinates(&self, p: &Polynomial) -> Result<Option<Vec<Rational>>> {
        let nf = self.normal_form(p)?;
        Ok(self
            .monomial_basis
            .as_ref()
            .map(|basis| basis.iter().map(|m| nf.coefficient(m)).collect()))
    }
}

/// Tjurina algebra `k[x]/(w, ∂w)` of a potential, with its dimension when
/// finite. An infinite quotient (non-isolated singularity) is reported as
/// `None`, not as an error.
pub fn tjurina(w: &Polynomial) -> Result<(QuotientRing, Option<usize>)> {
    if w.is_zero() {
        return Err(Error::Invalid("potential must be nonzero".into()));
    }
    if !w.constant_term().is_zero() {
        return Err(Error::Invalid(format!("potential {w} does not vanish at the origin")));
    }
    let vars = w.vars().clone();
    let mut gens = vec![w.clone()];
    gens.extend((0..vars.len()).map(|i| w.derivative(i)));
    let q = Ideal::new(&vars, gens, MonomialOrder::DegRevLex)?.groebner();
    let dim = q.dimension();
    Ok((q, dim))
}

fn leading(p: &Polynomial, order: &MonomialOrder) -> (Monomial, Rational) {
    let (m, c) = p.leading_term(order).expect("nonzero polynomial");
    (m.clone(), c.clone())
}

fn monic(p: &Polynomial, order: &MonomialOrder) -> Polynomial {
    let (_, c) = leading(p, order);
    if c.is_one() {
        p.clone()
    } else {
        p.scale(&c.recip())
    }
}

/// Full reduction of `p` modulo `basis`.
pub(crate) fn reduce(p: &Polynomial, basis: &[Polynomial], order: &MonomialOrder) -> Polynomial {
    let leads: Vec<(Monomial, Rational)> = basis.iter().map(|g| leading(g, order)).collect();
    let mut rest = p.clone();
    let mut remainder = Polynomial::zero(p.vars());
    while !rest.is_zero() {
        let (m, c) = leading(&rest, order);
        let divisor = leads.iter().position(|(lm, _)| lm.divides(&m));
        match divisor {
            Some(k) => {
                let (lm, lc) = &leads[k];
                let q = lm.quotient_of(&m).expect("divides");
                rest = &rest - &basis[k].mul_term(&q, &(c / lc));
            }
            None => {
                rest.add_term(m.clone(), -c.clone());
                remainder.add_term(m, c);
            }
        }
    }
    remainder
}

fn s_polynomial(f: &Polynomial, g: &Polynomial, order: &MonomialOrder) -> Polynomial {
    let (mf, cf) = leading(f, order);
    let (mg, cg) = leading(g, order);
    let l = mf.lcm(&mg);
    let a = mf.quotient_of(&l).expect("lcm");
    let b = mg.quotient_of(&l).expect("lcm");
    &f.mul_term(&a, &cf.recip()) - &g.mul_term(&b, &cg.recip())
}

fn buchberger(gens: &[Polynomial], order: &MonomialOrder, budget: &Budget) -> Result<Vec<Polynomial>> {
    let mut basis: Vec<Polynomial> = Vec::new();
    let mut leads: Vec<Monomial> = Vec::new();
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();

    for g in gens {
        let r = reduce(g, &basis, order);
        if r.is_zero() {
            continue;
        }
        let r = monic(&r, order);
        let k = basis.len();
        leads.push(leading(&r, order).0);
        basis.push(r);
        pairs.extend((0..k).map(|i| (i, k)));
    }

    while let Some(&(i, j)) = pairs.iter().min_by(|a, b| {
        let la = leads[a.0].lcm(&leads[a.1]);
        let lb = leads[b.0].lcm(&leads[b.1]);
        order.cmp(&la, &lb).then_with(|| a.cmp(b))
    }) {
        pairs.remove(&(i, j));
        if leads[i].coprime(&leads[j]) {
            continue;
        }
        let l = leads[i].lcm(&leads[j]);
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && leads[k].divides(&l)
                && !pairs.contains(&(i.min(k), i.max(k)))
                && !pairs.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        budget.charge(1)?;
        let r = reduce(&s_polynomial(&basis[i], &basis[j], order), &basis, order);
        if r.is_zero() {
            continue;
        }
        let r = monic(&r, order);
        let k = basis.len();
        leads.push(leading(&r, order).0);
        basis.push(r);
        pairs.extend((0..k).map(|i| (i, k)));
    }

    // Minimalize, then inter-reduce.
    let mut keep: Vec<usize> = Vec::new();
    for i in 0..basis.len() {
        let redundant = (0..basis.len()).any(|j| {
            j != i && leads[j].divides(&leads[i]) && (leads[j] != leads[i] || j < i)
        });
        if !redundant {
            keep.push(i);
        }
    }
    let minimal: Vec<Polynomial> = keep.iter().map(|&i| basis[i].clone()).collect();
    let mut reduced: Vec<Polynomial> = (0..minimal.len())
        .map(|i| {
            let others: Vec<Polynomial> = minimal
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, g)| g.clone())
                .collect();
            monic(&reduce(&minimal[i], &others, order), order)
        })
        .collect();
    reduced.sort_by(|a, b| order.cmp(&leading(b, order).0, &leading(a, order).0));
    Ok(reduced)
}

fn standard_monomials(vars: &Vars, basis: &[Polynomial], order: &MonomialOrder) -> Option<Vec<Monomial>> {
    let n = vars.len();
    let leads: Vec<Monomial> = basis.iter().map(|g| leading(g, order).0).collect();
    if leads.iter().any(Monomial::is_one) {
        return Some(Vec::new());
    }
    let mut bounds = vec![u32::MAX; n];
    for m in &leads {
        if let Some(i) = m.pure_power_of() {
            bounds[i] = bounds[i].min(m.exponents()[i]);
        }
    }
    if bounds.contains(&u32::MAX) {
        return None;
    }
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    loop {
        let m = Monomial::new(current.clone());
        if !leads.iter().any(|l| l.divides(&m)) {
            out.push(m);
        }
        // odometer over the box ∏ [0, bound_i)
        let mut k = 0;
        loop {
            if k == n {
                out.sort();
                return Some(out);
            }
            current[k] += 1;
            if current[k] < bounds[k] {
                break;
            }
            current[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(names: &[&str]) -> Vars {
        Vars::new(names).unwrap()
    }

    fn p(s: &str, v: &Vars) -> Polynomial {
        Polynomial::parse(s, v).unwrap()
    }

    fn ideal(v: &Vars, gens: &[&str], order: MonomialOrder) -> Ideal {
        Ideal::new(v, gens.iter().map(|g| p(g, v)).collect(), order).unwrap()
    }

    #[test]
    fn maximal_ideal() {
        let v = vars(&["x", "y"]);
        let q = ideal(&v, &["x*y", "x", "y"], MonomialOrder::DegRevLex).groebner();
        assert_eq!(q.groebner_basis(), &[p("x", &v), p("y", &v)]);
        assert_eq!(q.monomial_basis().unwrap(), &[Monomial::one(2)]);
    }

    #[test]
    fn univariate_containment() {
        let v = vars(&["x"]);
        let q = ideal(&v, &["x^3", "3*x^2"], MonomialOrder::DegRevLex).groebner();
        assert_eq!(q.groebner_basis(), &[p("x^2", &v)]);
        assert_eq!(q.monomial_basis().unwrap(), &[Monomial::new(vec![0]), Monomial::new(vec![1])]);
        assert!(q.normal_form(&p("x^3", &v)).unwrap().is_zero());
    }

    #[test]
    fn single_generator_is_infinite() {
        let v = vars(&["p", "q", "t"]);
        let q = ideal(&v, &["p*q - t"], MonomialOrder::DegRevLex).groebner();
        assert_eq!(q.groebner_basis().len(), 1);
        assert!(q.monomial_basis().is_none());
    }

    #[test]
    fn normal_forms() {
        let v = vars(&["x", "y"]);
        let q = ideal(&v, &["x", "y"], MonomialOrder::DegRevLex).groebner();
        assert_eq!(q.normal_form(&Polynomial::one(&v)).unwrap(), Polynomial::one(&v));
        // t is eliminated in favour of p*q
        let v = vars(&["t", "p", "q"]);
        let q = ideal(&v, &["t - p*q"], MonomialOrder::Block { first: 1 }).groebner();
        assert_eq!(q.normal_form(&p("t", &v)).unwrap(), p("p*q", &v));
        assert!(q.normal_form(&p("x", &vars(&["x"]))).is_err());
    }

    #[test]
    fn tjurina_numbers() {
        let v = vars(&["x", "y"]);
        let (q, dim) = tjurina(&p("x*y", &v)).unwrap();
        assert_eq!(dim, Some(1));
        assert_eq!(q.monomial_basis().unwrap(), &[Monomial::one(2)]);
        let v1 = vars(&["x"]);
        for n in 1..6u32 {
            let (q, dim) = tjurina(&p("x", &v1).pow(n + 1)).unwrap();
            assert_eq!(dim, Some(n as usize));
            let expect: Vec<Monomial> = (0..n).map(|e| Monomial::new(vec![e])).collect();
            assert_eq!(q.monomial_basis().unwrap(), &expect[..]);
        }
        // frozen from the truncated-linear-algebra oracle in tests/poly_oracle.rs
        assert_eq!(tjurina(&p("x^3 + y^3", &v)).unwrap().1, Some(4));
        // x^2 y is not isolated (singular along the y-axis)
        assert_eq!(tjurina(&p("x^2*y", &v)).unwrap().1, None);
        assert!(tjurina(&p("1 + x", &v)).is_err());
        assert!(tjurina(&Polynomial::zero(&v)).is_err());
    }

    #[test]
    fn cyclic_three_has_expected_basis_size() {
        // (x + y + z, xy + yz + zx, xyz - 1) has 6 solutions counted with multiplicity
        let v = vars(&["x", "y", "z"]);
        let q = ideal(&v, &["x + y + z", "x*y + y*z + z*x", "x*y*z - 1"], MonomialOrder::DegRevLex).groebner();
        assert_eq!(q.dimension(), Some(6));
        for g in q.ideal().generators() {
            assert!(q.contains(g).unwrap());
        }
    }

    #[test]
    fn budget_stops_buchberger() {
        let v = vars(&["x", "y"]);
        let i = ideal(&v, &["x^2 + y", "x*y + 1"], MonomialOrder::DegRevLex);
        assert!(matches!(i.groebner_with_budget(&Budget::new(0)), Err(Error::BudgetExhausted(0))));
        assert!(i.groebner_with_budget(&Budget::new(1000)).is_ok());
    }
}
