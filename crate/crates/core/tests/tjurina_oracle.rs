//! Tjurina numbers of weighted homogeneous potentials by graded linear
//! algebra: in each weighted degree `k`, the quotient `R_k / J_k` with
//! `J_k` spanned by monomial multiples of `w` and its partials.

use mfkit::poly::tjurina;
use mfkit::{Monomial, Polynomial, Rational, Vars};
use num_traits::Zero;

fn wdeg(m: &Monomial, weights: &[u32]) -> u32 {
    m.exponents().iter().zip(weights).map(|(e, w)| e * w).sum()
}

fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let mut r = 0;
    let cols = rows.first().map_or(0, |x| x.len());
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        for i in r + 1..rows.len() {
            if !rows[i][c].is_zero() {
                let f = &rows[i][c] / &rows[r][c];
                for k in c..cols {
                    let v = &rows[r][k] * &f;
                    rows[i][k] -= v;
                }
            }
        }
        r += 1;
    }
    r
}

fn monomials_of_weight(n: usize, weights: &[u32], k: u32) -> Vec<Monomial> {
    fn go(weights: &[u32], k: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        let i = prefix.len();
        if i == weights.len() {
            if k == 0 {
                out.push(Monomial::new(prefix.clone()));
            }
            return;
        }
        for e in 0..=k / weights[i] {
            prefix.push(e);
            go(weights, k - e * weights[i], prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&weights[..n], k, &mut Vec::new(), &mut out);
    out
}

fn oracle(w: &str, names: &[&str], weights: &[u32]) -> usize {
    let v = Vars::new(names).unwrap();
    let w = Polynomial::parse(w, &v).unwrap();
    let n = v.len();
    let mut gens = vec![w.clone()];
    gens.extend((0..n).map(|i| w.derivative(i)));
    let gen_deg: Vec<u32> = gens
        .iter()
        .map(|g| wdeg(g.terms().next().unwrap().0, weights))
        .collect();
    // the quotient vanishes above the socle degree n·d − 2Σw
    let bound = gen_deg[0] * n as u32;
    let mut total = 0;
    for k in 0..=bound {
        let basis = monomials_of_weight(n, weights, k);
        if basis.is_empty() {
            continue;
        }
        let mut rows = Vec::new();
        for (g, &dg) in gens.iter().zip(&gen_deg) {
            if dg > k {
                continue;
            }
            for m in monomials_of_weight(n, weights, k - dg) {
                let p = g.mul_term(&m, &Rational::from_integer(1.into()));
                rows.push(basis.iter().map(|b| p.coefficient(b)).collect());
            }
        }
        total += basis.len() - if rows.is_empty() { 0 } else { rank(rows) };
    }
    total
}

fn library(w: &str, names: &[&str]) -> usize {
    let v = Vars::new(names).unwrap();
    tjurina(&Polynomial::parse(w, &v).unwrap()).unwrap().1.unwrap()
}

#[test]
fn weighted_homogeneous_potentials() {
    let cases: &[(&str, &[&str], &[u32], usize)] = &[
        ("x*y", &["x", "y"], &[1, 1], 1),
        ("x^3", &["x"], &[1], 2),
        ("x^3 + y^3", &["x", "y"], &[1, 1], 4),
        ("x^3 + y^2", &["x", "y"], &[2, 3], 2),
        ("x^2*y + y^4", &["x", "y"], &[3, 2], 5),
        ("x*y + z^3", &["x", "y", "z"], &[3, 3, 2], 2),
        ("x^3 + y^3 + z^3", &["x", "y", "z"], &[1, 1, 1], 8),
        ("x*y + u*v - z^3", &["x", "y", "u", "v", "z"], &[3, 3, 3, 3, 2], 2),
    ];
    for (w, names, weights, frozen) in cases {
        let o = oracle(w, names, weights);
        assert_eq!(o, *frozen, "oracle for {w}");
        assert_eq!(library(w, names), o, "library for {w}");
    }
}
