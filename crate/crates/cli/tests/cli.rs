use std::io::Write;
use std::path::PathBuf;
use std::process::Command;

use mfkit_cli::examples::EXAMPLES;
use mfkit_cli::{run, Document};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn mfkit(args: &[&str]) -> mfkit_cli::Output {
    let mut full = vec!["mfkit"];
    full.extend_from_slice(args);
    run(full, None)
}

fn scratch(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn bundled_documents_round_trip() {
    for (name, _, text) in EXAMPLES {
        let doc = Document::parse(text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let again = Document::parse(&doc.to_string()).unwrap();
        assert_eq!(doc, again, "{name}");
        assert_eq!(doc.to_string(), again.to_string(), "{name}");
        let shown = mfkit(&["examples", "--name", name]);
        assert_eq!(shown.code, 0);
        assert_eq!(&shown.stdout, text);
    }
}

#[test]
fn verify_reports() {
    let out = mfkit(&["verify", "--name", "M", &data("node.mf")]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "M: valid\n"));
    let out = mfkit(&["--format", "records", "verify", "--name", "M", &data("node.mf")]);
    assert_eq!(out.stdout, "{\"command\":\"verify\",\"name\":\"M\",\"valid\":true,\"violations\":[]}\n");
}

#[test]
fn exit_codes() {
    let bad = scratch("vars: x y\npotential \"w\": x*y\nmf \"M\" potential \"w\" {\n  phi: [[x]]\n  psi: [[x]]\n}\n");
    let path = bad.path().to_str().unwrap();
    let out = mfkit(&["verify", "--name", "M", path]);
    assert_eq!(out.code, 1, "{}", out.stdout);
    assert!(out.stdout.contains("invalid"));

    let garbled = scratch("vars: x y\npotential \"w\": x*\n");
    let out = mfkit(&["verify", "--name", "M", garbled.path().to_str().unwrap()]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 2, column 18"), "{}", out.stderr);

    assert_eq!(mfkit(&["verify", "--name", "Q", &data("node.mf")]).code, 2);
    assert_eq!(mfkit(&["no-such-command"]).code, 2);
    assert_eq!(mfkit(&["verify", "--name", "M", "/nonexistent/file.mf"]).code, 2);
    assert_eq!(mfkit(&["versal", "--rank", "1", "--mode", "symplectic"]).code, 2);

    let out = mfkit(&["--max-degree", "1", "ext", "--source", "P", "--target", "P", &data("cusp.mf")]);
    assert_eq!(out.code, 3);
    assert_eq!(mfkit(&["--budget", "1", "versal", "--rank", "2"]).code, 3);
}

#[test]
fn budget_from_environment() {
    let args = ["mfkit", "versal", "--rank", "2"];
    assert_eq!(run(args, Some("1")).code, 3);
    assert_eq!(run(args, Some("1000000000")).code, 0);
    // the flag wins over the environment
    assert_eq!(run(["mfkit", "--budget", "1000000000", "versal", "--rank", "2"], Some("1")).code, 0);
    assert_eq!(run(args, Some("lots")).code, 2);
}

#[test]
fn emitted_documents_parse() {
    let cases: &[&[&str]] = &[
        &["shift", "--name", "M"],
        &["dual", "--name", "M", "--kind", "star"],
        &["dual", "--name", "M", "--kind", "transpose"],
        &["direct-sum", "--left", "M", "--right", "N"],
        &["knorrer", "--name", "M", "--new-vars", "u", "v"],
        &["knorrer", "--structure", "B", "--new-vars", "u", "v"],
        &["knorrer-squared", "--name", "M", "--new-vars", "a", "b", "u", "v"],
    ];
    for args in cases {
        let mut full = args.to_vec();
        let path = data("node.mf");
        full.push(&path);
        let out = mfkit(&full);
        assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
        let doc = Document::parse(&out.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", out.stdout));
        for m in &doc.mfs {
            assert!(m.mf.is_valid(), "{args:?}");
        }
        for s in &doc.structures {
            assert!(s.structure.is_valid(), "{args:?}");
        }
    }
}

#[test]
fn knorrer_of_a2_pair() {
    let out = mfkit(&["knorrer", "--name", "A", "--new-vars", "x", "y", &data("a2.mf")]);
    assert_eq!(out.code, 0);
    let doc = Document::parse(&out.stdout).unwrap();
    assert_eq!(doc.potentials[0].poly.to_string(), "-z^3 + x*y");
    assert!(doc.mfs[0].mf.is_valid());
}

#[test]
fn records_are_deterministic() {
    let runs: &[&[&str]] = &[
        &["ext", "--source", "M", "--target", "M"],
        &["deform", "--name", "M"],
        &["deform-structured", "--structure", "B"],
        &["ext-split", "--structure", "B"],
        &["structure-search", "--name", "M", "--kind", "twisted"],
        &["commutation-check", "--structure", "B", "--morphism", "swap"],
    ];
    for args in runs {
        let mut full = vec!["--format", "records"];
        full.extend_from_slice(args);
        let path = data("node_pair.mf");
        full.push(&path);
        let a = mfkit(&full);
        let b = mfkit(&full);
        assert_eq!(a.code, 0, "{args:?}: {}", a.stderr);
        assert_eq!(a.stdout, b.stdout);
        for line in a.stdout.lines() {
            serde_json::from_str::<serde_json::Value>(line).unwrap();
        }
    }
}

#[test]
fn binary_exit_status() {
    let exe = env!("CARGO_BIN_EXE_mfkit");
    let ok = Command::new(exe).args(["verify", "--name", "M", &data("node.mf")]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), "M: valid\n");
    let budget = Command::new(exe)
        .args(["versal", "--rank", "2"])
        .env("MFKIT_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(budget.status.code(), Some(3));
    let usage = Command::new(exe).args(["verify"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}
