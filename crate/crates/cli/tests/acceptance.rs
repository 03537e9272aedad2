//! Acceptance suite: one line per criterion, all checks exact.
//!
//! Runs without the libtest harness so the summary is always printed.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use mfkit::bilinear::{
    check_commutation, classify_brieskorn, predicted_tensor_type, rank_one_quadratic, tensor_structure,
    verify_structure, BilinearStructure, Sign, StructureKind,
};
use mfkit::deform::{obstruction_dims, tangent_dims, tangent_dims_structured};
use mfkit::homotopy::{ext, ext_adjoint_split, ExtOptions};
use mfkit::knorrer::{theta, theta_squared, theta_type, theta_with_structure, versal_family, VersalMode};
use mfkit::matrix::PolyMatrix;
use mfkit::mf::{mf_brieskorn, mf_xy};
use mfkit::{Budget, MatrixFactorization, Parity, Polynomial, Vars};
use mfkit_cli::examples::EXAMPLES;
use mfkit_cli::{run, Document};

const SEARCH_DEGREE: u32 = 2;

fn ext_dims(a: &MatrixFactorization, b: &MatrixFactorization) -> (usize, usize) {
    let e = ext(&Arc::new(a.clone()), &Arc::new(b.clone()), &ExtOptions::default(), &Budget::unlimited()).unwrap();
    assert!(e.stabilized, "{}", e.history_string());
    assert!(e.truncation_degree <= 12);
    e.dims
}

fn x_pair(a: &str, b: &str) -> MatrixFactorization {
    let v = Vars::new(&["x"]).unwrap();
    MatrixFactorization::parse(&v, &[&[a]], &[&[b]], "x^3").unwrap()
}

fn node_quadratic() -> BilinearStructure {
    rank_one_quadratic(Arc::new(mf_xy(1, 0).unwrap())).unwrap()
}

fn node_pair_structure() -> BilinearStructure {
    let m = Arc::new(mf_xy(1, 1).unwrap());
    let v = m.vars().clone();
    let id = PolyMatrix::identity(&v, 2);
    BilinearStructure::new(m, StructureKind::Untwisted, Sign::Plus, id.clone(), id.neg()).unwrap()
}

fn block(d: usize) -> BilinearStructure {
    classify_brieskorn(d, 1, 3, SEARCH_DEGREE).unwrap().witness
}

fn assert_valid(m: &MatrixFactorization) {
    let report = m.verify();
    assert!(report.is_valid(), "{m:?}: {:?}", report.violations);
    let v = m.vars();
    let w = PolyMatrix::scalar(v, m.rank(), m.potential());
    assert_eq!(m.phi().mul(m.psi()).unwrap(), w);
    assert_eq!(m.psi().mul(m.phi()).unwrap(), w);
}

fn brieskorn_params(d: usize) -> Vec<Vec<(u32, u32)>> {
    let single: Vec<(u32, u32)> = (2..=4).flat_map(|h| (1..h).map(move |n| (n, h))).collect();
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|p| {
                single.iter().map(move |&s| {
                    let mut q = p.clone();
                    q.push(s);
                    q
                })
            })
            .collect();
    }
    out
}

fn criterion_1() {
    let mut xy = Vec::new();
    for p in 0..=4 {
        for q in 0..=4 {
            if p + q > 0 {
                xy.push(mf_xy(p, q).unwrap());
            }
        }
    }
    let mut brieskorn = Vec::new();
    for d in 1..=3 {
        for params in brieskorn_params(d) {
            brieskorn.push(mf_brieskorn(&params).unwrap());
        }
    }
    for m in xy.iter().chain(&brieskorn) {
        assert_valid(m);
        assert_valid(&theta(m, "u", "v").unwrap().result);
    }
    for m in xy.iter().step_by(3).chain(brieskorn.iter().step_by(17)) {
        assert_valid(&theta_squared(m, None, ["a", "b", "u", "v"]).unwrap().result);
    }
    for a in &xy {
        for b in &xy {
            assert_valid(&a.direct_sum(b).unwrap());
        }
    }
    for m in &brieskorn {
        assert_valid(&m.direct_sum(&m.shift()).unwrap());
    }
    for a in xy.iter().step_by(4) {
        for b in brieskorn.iter().step_by(11) {
            assert_valid(&a.tensor(b).unwrap());
        }
    }
}

fn criterion_2() {
    let uvw = Vars::new(&["u", "v", "w"]).unwrap();
    for seed in 0..50 {
        let mut r = common::rng(1000 + seed);
        let n1 = 1 + (seed as usize) % 3;
        let n2 = 1 + (seed as usize / 3) % 3;
        let a = common::mf(&mut r, n1);
        let b = common::mf(&mut r, n2);
        let b = b.rename(&Vars::new(&uvw.names()[..n2]).unwrap()).unwrap();
        assert!(a.rank() <= 2 && b.rank() <= 2);
        let t = a.tensor(&b).unwrap();
        assert_valid(&t);
        let w = &a.potential().embed(t.vars()).unwrap() + &b.potential().embed(t.vars()).unwrap();
        assert_eq!(t.potential(), &w);
    }
}

fn criterion_3() {
    for seed in 0..20 {
        let m = common::mf(&mut common::rng(2000 + seed), 1 + seed as usize % 3);
        assert_eq!(m.dual(), m.transpose_dual().shift());
        assert_eq!(m.dual(), m.shift().transpose_dual());
        assert_eq!(m.dual().dual(), m);
        assert_eq!(m.transpose_dual().transpose_dual(), m);
        assert_eq!(m.shift().shift(), m);
        assert_valid(&m.dual());
        assert_valid(&m.transpose_dual());
        assert_valid(&m.shift());
    }
}

fn criterion_4() {
    let cases = [(node_quadratic(), 1), (block(1), 1), (block(2), -1)];
    assert_eq!(cases[1].0.kind(), StructureKind::Untwisted);
    assert_eq!(cases[2].0.kind(), StructureKind::Twisted);
    let mut r = common::rng(4);
    for (b, sign) in &cases {
        assert!(b.is_valid());
        for parity in [Parity::Even, Parity::Odd] {
            for _ in 0..20 {
                let f = common::morphism(&mut r, b.host(), b.host(), parity);
                let c = check_commutation(&f, b, b).unwrap();
                assert!(c.holds, "{f:?}");
                assert_eq!(c.sign, *sign);
            }
        }
    }
}

fn criterion_5() {
    let blocks: Vec<BilinearStructure> = (1..=4).map(block).collect();
    let partners = [node_quadratic(), block(2).rename(&Vars::new(&["y1", "y2"]).unwrap()).unwrap()];
    let mut seen = Vec::new();
    for b in &blocks {
        for p in &partners {
            let t = tensor_structure(b, p).unwrap();
            let s = &t.structure;
            assert!(verify_structure(s).is_valid(), "{:?}", verify_structure(s).violations);
            let predicted = predicted_tensor_type((b.kind(), b.sign()), (p.kind(), p.sign()));
            assert_eq!((s.kind(), s.sign()), predicted);
            let both_untwisted = b.kind() == StructureKind::Untwisted && p.kind() == StructureKind::Untwisted;
            let product = b.sign().times(p.sign());
            assert_eq!(s.sign(), if both_untwisted { product.negate() } else { product });
            seen.push(((b.kind(), b.sign()), (p.kind(), p.sign())));
        }
    }
    seen.sort();
    seen.dedup();
    assert_eq!(seen.len(), 8);
}

fn criterion_6() {
    let mut signs = Vec::new();
    for d in 1..=4 {
        let c = classify_brieskorn(d, 1, 3, SEARCH_DEGREE).unwrap();
        assert_eq!(c.kind == StructureKind::Untwisted, d % 2 == 1, "d = {d}");
        let sol = if c.kind == StructureKind::Untwisted { &c.untwisted } else { &c.twisted };
        let sol = sol.by_sign(c.sign);
        assert!(sol.invertible);
        assert_eq!(sol.constant_dim, 1);
        for s in [&c.untwisted, &c.twisted] {
            for other in [&s.plus, &s.minus] {
                if s.kind != c.kind || other.sign != c.sign {
                    assert!(!other.invertible, "d = {d}");
                }
            }
        }
        assert!(c.witness.is_valid());
        signs.push(c.sign);
    }
    assert_eq!(signs[2], signs[0].negate());
    assert_eq!(signs[3], signs[1].negate());
    assert_eq!(signs, [Sign::Plus, Sign::Minus, Sign::Minus, Sign::Plus]);
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn criterion_7() {
    assert_eq!(ext_dims(&mf_xy(1, 0).unwrap(), &mf_xy(1, 0).unwrap()), (1, 0));
    assert_eq!(ext_dims(&mf_xy(1, 1).unwrap(), &mf_xy(1, 1).unwrap()), (2, 2));
    assert_eq!(ext_dims(&x_pair("x", "x^2"), &x_pair("x", "x^2")), (1, 1));
    let golden = [
        (
            "node.mf",
            "M",
            "{\"command\":\"ext\",\"source\":\"M\",\"target\":\"M\",\"dims\":[1,0],\"stabilized\":true,\"truncation_degree\":2,\"history\":[{\"degree\":0,\"dims\":[1,0]},{\"degree\":1,\"dims\":[1,0]},{\"degree\":2,\"dims\":[1,0]}]}\n",
        ),
        (
            "node_pair.mf",
            "M",
            "{\"command\":\"ext\",\"source\":\"M\",\"target\":\"M\",\"dims\":[2,2],\"stabilized\":true,\"truncation_degree\":2,\"history\":[{\"degree\":0,\"dims\":[2,2]},{\"degree\":1,\"dims\":[2,2]},{\"degree\":2,\"dims\":[2,2]}]}\n",
        ),
        (
            "cusp.mf",
            "P",
            "{\"command\":\"ext\",\"source\":\"P\",\"target\":\"P\",\"dims\":[1,1],\"stabilized\":true,\"truncation_degree\":3,\"history\":[{\"degree\":0,\"dims\":[1,0]},{\"degree\":1,\"dims\":[1,1]},{\"degree\":2,\"dims\":[1,1]},{\"degree\":3,\"dims\":[1,1]}]}\n",
        ),
    ];
    for (file, name, record) in golden {
        let path = data(file);
        let out = run(
            ["mfkit", "--format", "records", "ext", "--source", name, "--target", name, &path],
            None,
        );
        assert_eq!(out.code, 0);
        assert_eq!(out.stdout, record, "{file}");
    }
}

fn criterion_8() {
    let pairs = [x_pair("x", "x^2"), x_pair("x^2", "x")];
    for a in &pairs {
        for b in &pairs {
            let ta = theta(a, "u", "v").unwrap().result;
            let tb = theta(b, "u", "v").unwrap().result;
            assert_eq!(ext_dims(&ta, &tb), ext_dims(a, b));
        }
    }
    let xy = [mf_xy(1, 0).unwrap(), mf_xy(0, 1).unwrap(), mf_xy(1, 1).unwrap(), mf_xy(2, 1).unwrap()];
    for a in &xy {
        for b in &xy {
            let ta = theta(a, "u", "v").unwrap().result;
            let tb = theta(b, "u", "v").unwrap().result;
            assert_eq!(ext_dims(&ta, &tb), ext_dims(a, b));
        }
    }
    let structures = [node_quadratic(), node_pair_structure(), block(1), block(2), block(3), block(4)];
    for b in &structures {
        let out = theta_with_structure(b, "u", "v").unwrap();
        let s = out.structure.unwrap();
        assert!(s.is_valid());
        let expected = match b.kind() {
            StructureKind::Untwisted => (StructureKind::Twisted, b.sign().negate()),
            StructureKind::Twisted => (StructureKind::Untwisted, b.sign()),
        };
        assert_eq!((s.kind(), s.sign()), expected);
        assert_eq!(theta_type(b.kind(), b.sign()), expected);
    }
}

fn criterion_9() {
    let b = block(1);
    assert_eq!((b.kind(), b.sign()), (StructureKind::Untwisted, Sign::Plus));
    let out = theta_squared(b.host(), Some(&b), ["x", "y", "u", "v"]).unwrap();
    let m = &out.result;
    assert_valid(m);
    assert_eq!(m.rank(), 4);
    let w = Polynomial::parse("x*y + u*v - x1^3", m.vars()).unwrap();
    assert_eq!(m.potential(), &w);
    let s = out.structure.unwrap();
    assert!(verify_structure(&s).is_valid());
    assert_eq!((s.kind(), s.sign()), (StructureKind::Untwisted, Sign::Minus));
    assert_eq!(ext_dims(m, m), ext_dims(b.host(), b.host()));
    assert_eq!(ext_dims(m, m), (1, 1));
}

fn criterion_10() {
    let opts = ExtOptions::default();
    let budget = Budget::unlimited();
    let frozen = [
        (mf_xy(1, 1).unwrap(), (2, 0, 2), 1),
        (x_pair("x", "x^2"), (1, 1, 2), 0),
        (mf_xy(1, 0).unwrap(), (0, 0, 0), 0),
    ];
    for (m, dims, obstruction) in frozen {
        let m = Arc::new(m);
        let r = tangent_dims(&m, &opts, &budget).unwrap();
        assert_eq!((r.ext1_dim, r.ideal_dim, r.tangent_dim), dims);
        assert_eq!(r.tangent_dim, r.ext1_dim + r.ideal_dim);
        assert_eq!(r.obstruction_dim, obstruction);
        assert_eq!(obstruction_dims(&m, &opts, &budget).unwrap(), obstruction);
    }
    let plain = versal_family(1, VersalMode::Plain, &budget).unwrap();
    let r = tangent_dims(&Arc::new(mf_xy(1, 1).unwrap()), &opts, &budget).unwrap();
    assert_eq!(plain.base_tangent_dim, r.tangent_dim);

    // (structure, (ext0 ±), (ext1 ±), structured tangent, structured obstruction)
    let structured = [
        (node_quadratic(), (1, 0), (0, 0), 0, 0),
        (node_pair_structure(), (2, 0), (1, 1), 1, 1),
        (block(1), (1, 0), (0, 1), 2, 0),
        (block(2), (1, 1), (2, 0), 5, 1),
    ];
    for (b, e0, e1, tangent, obstruction) in structured {
        let (e, split) = ext_adjoint_split(&b, &opts, &budget).unwrap();
        assert_eq!(split.even.0 + split.even.1, e.dims.0);
        assert_eq!(split.odd.0 + split.odd.1, e.dims.1);
        assert_eq!((split.even, split.odd), (e0, e1), "{:?}", b.host());
        let r = tangent_dims_structured(&b, &opts, &budget).unwrap();
        let s = r.structured.unwrap();
        assert_eq!((s.ext0_split, s.ext1_split), (e0, e1));
        assert_eq!((s.tangent_dim, s.obstruction_dim), (tangent, obstruction), "{:?}", b.host());
    }
    let orthogonal = versal_family(1, VersalMode::Orthogonal, &budget).unwrap();
    let r = tangent_dims_structured(&node_pair_structure(), &opts, &budget).unwrap();
    assert_eq!(orthogonal.base_tangent_dim, r.structured.unwrap().tangent_dim);
}

fn criterion_11() {
    let budget = Budget::unlimited();
    for (r, mode) in [
        (1, VersalMode::Plain),
        (2, VersalMode::Plain),
        (1, VersalMode::Orthogonal),
        (2, VersalMode::Orthogonal),
        (2, VersalMode::Symplectic),
    ] {
        let f = versal_family(r, mode, &budget).unwrap();
        assert!(f.certified());
        assert_eq!(f.certificate.len(), 2 * (2 * r) * (2 * r));
        for e in &f.certificate {
            assert!(e.reduced.is_zero(), "{mode} r={r}: {} reduces to {}", e.entry, e.reduced);
        }
    }
}

fn criterion_12() {
    for (name, _, text) in EXAMPLES {
        let doc = Document::parse(text).unwrap();
        let emitted = doc.to_string();
        let again = Document::parse(&emitted).unwrap();
        assert_eq!(doc, again, "{name}");
        assert_eq!(again.to_string(), emitted, "{name}");
    }
    let commands: &[(&str, &[&str])] = &[
        ("node.mf", &["verify", "--name", "M"]),
        ("node.mf", &["structure-search", "--name", "M", "--kind", "untwisted"]),
        ("node.mf", &["commutation-check", "--structure", "B", "--morphism", "q"]),
        ("node_pair.mf", &["deform", "--name", "M"]),
        ("node_pair.mf", &["deform-structured", "--structure", "B"]),
        ("a2.mf", &["ext", "--source", "A", "--target", "A2"]),
        ("cusp.mf", &["ext-split", "--structure", "B"]),
        ("brieskorn2.mf", &["structure-verify", "--name", "B"]),
        ("brieskorn2.mf", &["knorrer", "--structure", "B", "--new-vars", "u", "v"]),
    ];
    for (file, args) in commands {
        let path = data(file);
        let mut full = vec!["mfkit", "--format", "records"];
        full.extend_from_slice(args);
        full.push(&path);
        let a = run(full.clone(), None);
        let b = run(full, None);
        assert_eq!(a.code, 0, "{file} {args:?}: {}", a.stderr);
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout.as_bytes(), b.stdout.as_bytes(), "{file} {args:?}");
    }
    let versal = |_: ()| run(["mfkit", "--format", "records", "versal", "--rank", "2"], None).stdout;
    assert_eq!(versal(()), versal(()));
}

fn main() {
    let criteria: [(&str, fn()); 12] = [
        ("factorization axioms for all constructors", criterion_1),
        ("tensor potentials add on 50 random pairs", criterion_2),
        ("duality identities and involutions", criterion_3),
        ("commutation rule with the structure sign", criterion_4),
        ("tensor structure types, 8 combinations", criterion_5),
        ("unique structures on d = 1..4 blocks", criterion_6),
        ("frozen Ext dimensions and golden records", criterion_7),
        ("Ext and structure kinds under the Knorrer functor", criterion_8),
        ("squared Knorrer functor flips the sign", criterion_9),
        ("deformation dimensions", criterion_10),
        ("versal family certificates", criterion_11),
        ("document round trip and deterministic records", criterion_12),
    ];
    let mut failed = Vec::new();
    for (i, (label, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let ok = catch_unwind(AssertUnwindSafe(check)).is_ok();
        let status = if ok { "PASS" } else { "FAIL" };
        println!("criterion {:>2}: {status}  {label} ({:.1?})", i + 1, start.elapsed());
        if !ok {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 12 criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
