//! Exact multivariate polynomials over the rationals.

mod groebner;
mod module;
mod order;
mod parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use groebner::{tjurina, Ideal, QuotientRing};
pub use module::{ModuleBasis, ModuleElement};
pub use order::MonomialOrder;

pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// An ordered list of variable names shared by polynomials of one ring.
#[derive(Clone)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for n in names {
            let n = n.as_ref();
            if !is_identifier(n) {
                return Err(Error::Invalid(format!("`{n}` is not a valid variable name")));
            }
            if !seen.insert(n.to_string()) {
                return Err(Error::VariableCollision(n.to_string()));
            }
        }
        Ok(Vars(names.iter().map(|n| n.as_ref().to_string()).collect()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    /// Variables of `self` followed by those of `other` not already present.
    pub fn union(&self, other: &Vars) -> Vars {
        if self == other {
            return self.clone();
        }
        let mut names: Vec<String> = self.0.to_vec();
        for n in other.0.iter() {
            if !names.contains(n) {
                names.push(n.clone());
            }
        }
        Vars(names.into())
    }

    /// Appends fresh variables, failing if any is already present.
    pub fn extend<S: AsRef<str>>(&self, extra: &[S]) -> Result<Vars> {
        let mut names: Vec<String> = self.0.to_vec();
        names.extend(extra.iter().map(|s| s.as_ref().to_string()));
        Vars::new(&names)
    }

    pub fn same(&self, other: &Vars) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::VariableMismatch {
                left: self.0.join(" "),
                right: other.0.join(" "),
            })
        }
    }
}

impl PartialEq for Vars {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Vars {}

impl fmt::Debug for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vars{:?}", &self.0[..])
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Exponent vector. The derived order on the wrapper is graded reverse
/// lexicographic, so iterating a `BTreeMap<Monomial, _>` visits terms in
/// increasing degrevlex order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Box<[u32]>);

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity].into())
    }

    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents.into())
    }

    pub fn variable(arity: usize, index: usize) -> Self {
        let mut e = vec![0; arity];
        e[index] = 1;
        Monomial(e.into())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if self.divides(other) {
            Some(Monomial(other.0.iter().zip(self.0.iter()).map(|(a, b)| a - b).collect()))
        } else {
            None
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Index of the variable if this monomial is a pure power `x_i^k`, `k ≥ 1`.
    pub fn pure_power_of(&self) -> Option<usize> {
        let mut found = None;
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }

    /// All monomials of the given total degree in `arity` variables,
    /// in decreasing lex order.
    pub fn all_of_degree(arity: usize, degree: u32) -> Vec<Monomial> {
        fn rec(arity: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if prefix.len() + 1 == arity {
                prefix.push(left);
                out.push(Monomial(prefix.clone().into()));
                prefix.pop();
                return;
            }
            for e in (0..=left).rev() {
                prefix.push(e);
                rec(arity, left - e, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if arity == 0 {
            if degree == 0 {
                out.push(Monomial::one(0));
            }
            return out;
        }
        rec(arity, degree, &mut Vec::with_capacity(arity), &mut out);
        out
    }

    /// All monomials of total degree at most `degree`.
    pub fn all_up_to_degree(arity: usize, degree: u32) -> Vec<Monomial> {
        (0..=degree).flat_map(|d| Monomial::all_of_degree(arity, d)).collect()
    }

    pub(crate) fn fmt_with(&self, vars: &Vars) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(vars.names()[i].clone()),
                _ => parts.push(format!("{}^{}", vars.names()[i], e)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        order::degrevlex(self, other)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{:?}", &self.0[..])
    }
}

/// Arithmetic operation selector for [`Polynomial::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// A polynomial with rational coefficients in a fixed list of variables.
///
/// Zero coefficients are never stored, so structural equality is equality
/// of polynomials. The operator impls (`+`, `-`, `*`) panic when the two
/// variable lists differ; [`Polynomial::arith`] reports the mismatch instead.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    vars: Vars,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(vars: &Vars) -> Self {
        Polynomial {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &Vars) -> Self {
        Polynomial::constant(vars, Rational::one())
    }

    pub fn constant(vars: &Vars, c: Rational) -> Self {
        Polynomial::monomial(vars, Monomial::one(vars.len()), c)
    }

    pub fn int(vars: &Vars, c: i64) -> Self {
        Polynomial::constant(vars, rat(c))
    }

    pub fn monomial(vars: &Vars, m: Monomial, c: Rational) -> Self {
        assert_eq!(m.arity(), vars.len(), "monomial arity does not match variable list");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn var(vars: &Vars, name: &str) -> Result<Self> {
        let i = vars
            .index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(Polynomial::monomial(vars, Monomial::variable(vars.len(), i), Rational::one()))
    }

    pub fn from_terms<I>(vars: &Vars, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Polynomial::zero(vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn parse(text: &str, vars: &Vars) -> Result<Self> {
        parse::parse_polynomial(text, vars)
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing degrevlex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Value at the origin.
    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one(self.vars.len()))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Lowest total degree of a term; `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&Monomial, &Rational)> {
        match order {
            MonomialOrder::DegRevLex => self.terms.iter().next_back(),
            _ => self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0)),
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn arith(&self, other: &Polynomial, op: ArithOp) -> Result<Polynomial> {
        self.vars.same(&other.vars)?;
        Ok(match op {
            ArithOp::Add => self.add_unchecked(other, Rational::one()),
            ArithOp::Sub => self.add_unchecked(other, -Rational::one()),
            ArithOp::Mul => self.mul_unchecked(other),
        })
    }

    fn add_unchecked(&self, other: &Polynomial, scale: Rational) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c * &scale);
        }
        out
    }

    fn mul_unchecked(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(&self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(&self.vars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Partial derivative with respect to the `i`-th variable.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut ex = m.0.to_vec();
            ex[i] -= 1;
            out.add_term(Monomial(ex.into()), c * rat(e as i64));
        }
        out
    }

    /// Rewrites the polynomial over a larger variable list containing all
    /// current variables (matched by name).
    pub fn embed(&self, target: &Vars) -> Result<Polynomial> {
        if &self.vars == target {
            return Ok(self.clone());
        }
        let map: Vec<usize> = self
            .vars
            .names()
            .iter()
            .map(|n| target.index_of(n).ok_or_else(|| Error::UnknownVariable(n.clone())))
            .collect::<Result<_>>()?;
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut ex = vec![0; target.len()];
            for (i, &e) in m.0.iter().enumerate() {
                ex[map[i]] = e;
            }
            out.add_term(Monomial(ex.into()), c.clone());
        }
        Ok(out)
    }

    /// The same polynomial over a variable list of equal length, matching
    /// variables by position.
    pub fn rename(&self, target: &Vars) -> Result<Polynomial> {
        if target.len() != self.vars.len() {
            return Err(Error::VariableMismatch {
                left: self.vars.names().join(" "),
                right: target.names().join(" "),
            });
        }
        Ok(Polynomial {
            vars: target.clone(),
            terms: self.terms.clone(),
        })
    }

    /// Applies the ring automorphism `x_i ↦ -x_i`.
    pub fn negate_variable(&self, i: usize) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), if m.0[i] % 2 == 1 { -c } else { c.clone() }))
                .collect(),
        }
    }

    /// Drops all terms of total degree above `degree`.
    pub fn truncate(&self, degree: u32) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Inverse of a unit in the power series ring, up to the given degree.
    pub fn inverse_truncated(&self, degree: u32) -> Result<Polynomial> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::NotInvertible(format!("{self} has zero constant term")));
        }
        // 1/(c0 (1 + n)) = c0^{-1} Σ (-n)^k
        let inv0 = c0.recip();
        let n = (self - &Polynomial::constant(&self.vars, c0)).scale(&inv0);
        let neg_n = -&n;
        let mut acc = Polynomial::one(&self.vars);
        let mut power = Polynomial::one(&self.vars);
        for _ in 0..degree {
            power = (&power * &neg_n).truncate(degree);
            if power.is_zero() {
                break;
            }
            acc = &acc + &power;
        }
        Ok(acc.scale(&inv0))
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a
    /// remainder. A single polynomial is a Gröbner basis of the ideal it
    /// generates, so multivariate division decides divisibility.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let order = MonomialOrder::DegRevLex;
        let (lm, lc) = divisor.leading_term(&order).map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rest = self.clone();
        let mut quotient = Polynomial::zero(&self.vars);
        while let Some((m, c)) = rest.leading_term(&order).map(|(m, c)| (m.clone(), c.clone())) {
            let q = lm.quotient_of(&m)?;
            let factor = c / &lc;
            rest = &rest - &divisor.mul_term(&q, &factor);
            quotient.add_term(q, factor);
        }
        Some(quotient)
    }

    /// Map a closure over coefficients, dropping any that become zero.
    pub fn map_coefficients<F: Fn(&Rational) -> Rational>(&self, f: F) -> Polynomial {
        Polynomial::from_terms(&self.vars, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", m.fmt_with(&self.vars))?;
            } else {
                write!(f, "{}*{}", abs, m.fmt_with(&self.vars))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl std::ops::$trait<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                assert!(self.vars == rhs.vars, "polynomials over different variable lists");
                $body(self, rhs)
            }
        }
        impl std::ops::$trait<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                std::ops::$trait::$method(&self, &rhs)
            }
        }
    };
}

binop!(Add, add, |a: &Polynomial, b: &Polynomial| a.add_unchecked(b, Rational::one()));
binop!(Sub, sub, |a: &Polynomial, b: &Polynomial| a.add_unchecked(b, -Rational::one()));
binop!(Mul, mul, |a: &Polynomial, b: &Polynomial| a.mul_unchecked(b));

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl std::ops::Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Vars {
        Vars::new(&["x", "y"]).unwrap()
    }

    fn p(s: &str, v: &Vars) -> Polynomial {
        Polynomial::parse(s, v).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let v = xy();
        let prod = p("x+y", &v).arith(&p("x-y", &v), ArithOp::Mul).unwrap();
        assert_eq!(prod, p("x^2 - y^2", &v));
    }

    #[test]
    fn adding_zero_is_identity() {
        let v = xy();
        let q = p("3*x^2*y - 1/2", &v);
        assert_eq!(q.arith(&Polynomial::zero(&v), ArithOp::Add).unwrap(), q);
    }

    #[test]
    fn x_times_y_is_the_node() {
        let v = xy();
        let w = p("x", &v).arith(&p("y", &v), ArithOp::Mul).unwrap();
        assert_eq!(w.to_string(), "x*y");
    }

    #[test]
    fn mismatched_variables_are_rejected() {
        let a = p("x", &xy());
        let b = p("x", &Vars::new(&["x", "z"]).unwrap());
        assert!(matches!(a.arith(&b, ArithOp::Add), Err(Error::VariableMismatch { .. })));
    }

    #[test]
    fn display_is_canonical() {
        let v = Vars::new(&["x", "y", "z"]).unwrap();
        assert_eq!(p("-z^3 + y*x", &v).to_string(), "-z^3 + x*y");
        assert_eq!(p("x^2/2", &v).to_string(), "1/2*x^2");
        assert_eq!(p("-1 - x", &v).to_string(), "-x - 1");
        assert_eq!(p("x - x", &v).to_string(), "0");
    }

    #[test]
    fn derivative_and_embedding() {
        let v = xy();
        let w = p("x^3 + x*y^2", &v);
        assert_eq!(w.derivative(0), p("3*x^2 + y^2", &v));
        let big = Vars::new(&["u", "y", "x"]).unwrap();
        assert_eq!(w.embed(&big).unwrap(), p("x^3 + x*y^2", &big));
        assert!(w.embed(&Vars::new(&["x"]).unwrap()).is_err());
    }

    #[test]
    fn truncated_inverse_of_unit() {
        let v = xy();
        let u = p("1 + x", &v);
        let inv = u.inverse_truncated(4).unwrap();
        assert_eq!(inv, p("1 - x + x^2 - x^3 + x^4", &v));
        assert_eq!((&u * &inv).truncate(4), Polynomial::one(&v));
        assert!(p("x", &v).inverse_truncated(3).is_err());
    }

    #[test]
    fn exact_division() {
        let v = xy();
        let a = p("x^2 - y^2", &v);
        assert_eq!(a.div_exact(&p("x - y", &v)), Some(p("x + y", &v)));
        assert_eq!(a.div_exact(&p("x", &v)), None);
    }

    #[test]
    fn monomial_enumeration_counts() {
        // C(n + d, n)
        assert_eq!(Monomial::all_up_to_degree(3, 4).len(), 35);
        assert_eq!(Monomial::all_of_degree(2, 5).len(), 6);
    }
}
