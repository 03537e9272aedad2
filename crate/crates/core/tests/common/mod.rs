#![allow(dead_code)]

use std::sync::Arc;

use mfkit::{GaugePair, MatrixFactorization, MorphismPair, Parity, PolyMatrix, Polynomial, Rational, Vars};
use mfkit::Monomial;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn vars(n: usize) -> Vars {
    Vars::new(&["x", "y", "z"][..n]).unwrap()
}

/// Random polynomial with terms of degree `lo..=hi` and small integer
/// coefficients; never zero when `lo ≥ 1`.
pub fn poly(r: &mut ChaCha8Rng, v: &Vars, lo: u32, hi: u32) -> Polynomial {
    loop {
        let mut p = Polynomial::zero(v);
        for d in lo..=hi {
            for m in Monomial::all_of_degree(v.len(), d) {
                if r.gen_bool(0.4) {
                    let c: i64 = r.gen_range(-3..=3);
                    p = &p + &Polynomial::monomial(v, m, Rational::from_integer(c.into()));
                }
            }
        }
        if !p.is_zero() || lo == 0 {
            return p;
        }
    }
}

pub fn unimodular(r: &mut ChaCha8Rng, v: &Vars, n: usize) -> PolyMatrix {
    let mut lower = PolyMatrix::identity(v, n);
    let mut upper = PolyMatrix::identity(v, n);
    for i in 0..n {
        for j in 0..n {
            let c = Polynomial::int(v, r.gen_range(-2..=2));
            if i > j {
                lower.set(i, j, c);
            } else if i < j {
                upper.set(i, j, c);
            }
        }
    }
    lower.mul(&upper).unwrap()
}

/// Random factorization of rank ≤ 2 in ≤ 3 variables with entries of
/// degree ≤ 2, built from rank-one pieces and a constant gauge.
pub fn mf(r: &mut ChaCha8Rng, nvars: usize) -> MatrixFactorization {
    let v = vars(nvars);
    let f = poly(r, &v, 1, 2);
    let g = poly(r, &v, 1, 2);
    let one = |a: &Polynomial, b: &Polynomial| {
        MatrixFactorization::new(
            PolyMatrix::scalar(&v, 1, a),
            PolyMatrix::scalar(&v, 1, b),
            a * b,
        )
        .unwrap()
    };
    let base = match r.gen_range(0..3) {
        0 => one(&f, &g),
        1 => one(&f, &g).direct_sum(&one(&g, &f)).unwrap(),
        _ => {
            let h = poly(r, &v, 1, 1);
            let k = poly(r, &v, 1, 1);
            one(&f, &g).tensor(&one(&h, &k)).unwrap()
        }
    };
    let n = base.rank();
    let gauge = GaugePair::new(unimodular(r, &v, n), unimodular(r, &v, n)).unwrap();
    base.gauge(&gauge, 0).unwrap().mf
}

pub fn morphism(
    r: &mut ChaCha8Rng,
    src: &Arc<MatrixFactorization>,
    tgt: &Arc<MatrixFactorization>,
    parity: Parity,
) -> MorphismPair {
    let v = src.vars().clone();
    let mut block = || {
        let mut m = PolyMatrix::zeros(&v, tgt.rank(), src.rank());
        for i in 0..tgt.rank() {
            for j in 0..src.rank() {
                m.set(i, j, poly(r, &v, 0, 2));
            }
        }
        m
    };
    let s = block();
    let t = block();
    MorphismPair::new(src.clone(), tgt.clone(), parity, s, t).unwrap()
}
