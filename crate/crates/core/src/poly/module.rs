//! Gröbner bases of submodules of a free module `k[x]^r`.
//!
//! Terms are pairs `(monomial, position)` compared term-over-position with
//! degrevlex on the monomial and lower positions winning ties. The order is
//! degree compatible, so standard terms of degree at most `d` count the
//! affine Hilbert function of the quotient module.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use super::{Monomial, Polynomial, Rational, Vars};
use crate::budget::Budget;
use crate::error::Result;

pub type ModuleElement = Vec<Polynomial>;

fn cmp_term(a: &(Monomial, usize), b: &(Monomial, usize)) -> Ordering {
    a.0.cmp(&b.0).then_with(|| b.1.cmp(&a.1))
}

fn leading(v: &[Polynomial]) -> Option<((Monomial, usize), Rational)> {
    let mut best: Option<((Monomial, usize), Rational)> = None;
    for (pos, p) in v.iter().enumerate() {
        if let Some((m, c)) = p.terms().next_back() {
            let cand = (m.clone(), pos);
            if best.as_ref().is_none_or(|(b, _)| cmp_term(&cand, b) == Ordering::Greater) {
                best = Some((cand, c.clone()));
            }
        }
    }
    best
}

fn is_zero(v: &[Polynomial]) -> bool {
    v.iter().all(Polynomial::is_zero)
}

fn sub_scaled(v: &mut [Polynomial], g: &[Polynomial], m: &Monomial, c: &Rational) {
    for (a, b) in v.iter_mut().zip(g.iter()) {
        if !b.is_zero() {
            *a = &*a - &b.mul_term(m, c);
        }
    }
}

fn reduce(v: &[Polynomial], basis: &[ModuleElement]) -> ModuleElement {
    let leads: Vec<((Monomial, usize), Rational)> = basis.iter().map(|g| leading(g).expect("nonzero")).collect();
    let vars = v[0].vars().clone();
    let mut rest: ModuleElement = v.to_vec();
    let mut remainder: ModuleElement = vec![Polynomial::zero(&vars); v.len()];
    while let Some(((m, pos), c)) = leading(&rest) {
        let hit = leads
            .iter()
            .position(|((lm, lp), _)| *lp == pos && lm.divides(&m));
        match hit {
            Some(k) => {
                let ((lm, _), lc) = &leads[k];
                let q = lm.quotient_of(&m).expect("divides");
                sub_scaled(&mut rest, &basis[k], &q, &(c / lc));
            }
            None => {
                rest[pos].add_term(m.clone(), -c.clone());
                remainder[pos].add_term(m, c);
            }
        }
    }
    remainder
}

/// Reduced Gröbner basis of a submodule together with its leading terms.
#[derive(Debug, Clone)]
pub struct ModuleBasis {
    vars: Vars,
    rank: usize,
    elements: Vec<ModuleElement>,
}

impl ModuleBasis {
    /// Gröbner basis of the submodule generated by `generators`, each a
    /// vector of length `rank`.
    pub fn compute(vars: &Vars, rank: usize, generators: &[ModuleElement], budget: &Budget) -> Result<Self> {
        let mut basis: Vec<ModuleElement> = Vec::new();
        let mut leads: Vec<(Monomial, usize)> = Vec::new();
        let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
        let push = |r: ModuleElement,
                        basis: &mut Vec<ModuleElement>,
                        leads: &mut Vec<(Monomial, usize)>,
                        pairs: &mut BTreeSet<(usize, usize)>| {
            let (lt, c) = leading(&r).expect("nonzero");
            let r: ModuleElement = r.iter().map(|p| p.scale(&c.recip())).collect();
            let k = basis.len();
            for (i, l) in leads.iter().enumerate() {
                if l.1 == lt.1 {
                    pairs.insert((i, k));
                }
            }
            leads.push(lt);
            basis.push(r);
        };
        for g in generators {
            assert_eq!(g.len(), rank, "generator length must equal module rank");
            let r = if basis.is_empty() { g.clone() } else { reduce(g, &basis) };
            if !is_zero(&r) {
                push(r, &mut basis, &mut leads, &mut pairs);
            }
        }
        while let Some(&(i, j)) = pairs.iter().next() {
            pairs.remove(&(i, j));
            let l = leads[i].0.lcm(&leads[j].0);
            let a = leads[i].0.quotient_of(&l).expect("lcm");
            let b = leads[j].0.quotient_of(&l).expect("lcm");
            let mut s: ModuleElement = basis[i].iter().map(|p| p.mul_term(&a, &Rational::from_integer(1.into()))).collect();
            sub_scaled(&mut s, &basis[j], &b, &Rational::from_integer(1.into()));
            budget.charge(1)?;
            let r = reduce(&s, &basis);
            if !is_zero(&r) {
                push(r, &mut basis, &mut leads, &mut pairs);
            }
        }
        // keep only elements with minimal leading terms
        let elements: Vec<ModuleElement> = (0..basis.len())
            .filter(|&i| {
                !(0..basis.len()).any(|j| {
                    j != i
                        && leads[j].1 == leads[i].1
                        && leads[j].0.divides(&leads[i].0)
                        && (leads[j].0 != leads[i].0 || j < i)
                })
            })
            .map(|i| basis[i].clone())
            .collect();
        Ok(ModuleBasis {
            vars: vars.clone(),
            rank,
            elements,
        })
    }

    pub fn elements(&self) -> &[ModuleElement] {
        &self.elements
    }

    pub fn leading_terms(&self) -> Vec<(Monomial, usize)> {
        self.elements.iter().map(|g| leading(g).expect("nonzero").0).collect()
    }

    pub fn reduce(&self, v: &[Polynomial]) -> ModuleElement {
        if self.elements.is_empty() {
            return v.to_vec();
        }
        reduce(v, &self.elements)
    }

    /// Number of standard terms `m·e_i` with `deg m = d`, for `d = 0..=bound`.
    pub fn hilbert_values(&self, bound: u32) -> Vec<usize> {
        let leads = self.leading_terms();
        (0..=bound)
            .map(|d| {
                let monos = Monomial::all_of_degree(self.vars.len(), d);
                (0..self.rank)
                    .map(|pos| {
                        monos
                            .iter()
                            .filter(|m| !leads.iter().any(|(l, p)| *p == pos && l.divides(m)))
                            .count()
                    })
                    .sum()
            })
            .collect()
    }

    /// Whether the quotient module is finite-dimensional over the field.
    pub fn quotient_is_finite(&self) -> bool {
        let leads = self.leading_terms();
        (0..self.rank).all(|pos| {
            (0..self.vars.len()).all(|i| {
                leads
                    .iter()
                    .any(|(l, p)| *p == pos && (l.is_one() || l.pure_power_of() == Some(i)))
            })
        })
    }

    pub fn contains(&self, v: &[Polynomial]) -> bool {
        self.reduce(v).iter().all(|p| p.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cokernel_of_x_over_node() {
        let v = Vars::new(&["x", "y"]).unwrap();
        let x = Polynomial::parse("x", &v).unwrap();
        let b = ModuleBasis::compute(&v, 1, &[vec![x]], &Budget::unlimited()).unwrap();
        assert_eq!(b.hilbert_values(4), vec![1, 1, 1, 1, 1]);
        assert!(!b.quotient_is_finite());
    }

    #[test]
    fn rank_two_module() {
        let v = Vars::new(&["x", "y"]).unwrap();
        let p = |s: &str| Polynomial::parse(s, &v).unwrap();
        // columns of [[x, y], [-y, x]]
        let gens = vec![vec![p("x"), p("-y")], vec![p("y"), p("x")]];
        let b = ModuleBasis::compute(&v, 2, &gens, &Budget::unlimited()).unwrap();
        for g in &gens {
            assert!(b.contains(g));
        }
        // quotient ≅ k[x,y]/(x^2 + y^2): Hilbert function 1, 2, 2, 2, ...
        assert_eq!(b.hilbert_values(4), vec![2, 2, 2, 2, 2]);
    }
}
