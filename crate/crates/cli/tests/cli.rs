use qflow_cli::fit::{fit_polynomial, Degree};
use qflow_cli::run;
use std::path::{Path, PathBuf};
use std::process::Command;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn corpus(name: &str) -> String {
    root().join("corpus").join(name).display().to_string()
}

fn qflow(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("qflow").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn value(text: &str, key: &str) -> u64 {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|v| v.trim().parse().ok()))
        .unwrap_or_else(|| panic!("no `{key}` in\n{text}"))
}

#[test]
fn compile_writes_qc_and_counts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (code, _, err) = qflow(&["compile", &corpus("small/guarded.twr"), "--width", "1", "--opt", "none", "--level", "mcx", "--out", out]);
    assert_eq!(code, 0, "{err}");
    let qc = std::fs::read_to_string(dir.path().join("guarded.qc")).unwrap();
    let body: Vec<&str> =
        qc.lines().skip_while(|l| *l != "BEGIN").skip(1).take_while(|l| *l != "END").collect();
    assert_eq!(body.len(), 6, "{qc}");
    let counts = std::fs::read_to_string(dir.path().join("guarded.counts")).unwrap();
    assert_eq!(value(&counts, "mcx_ge2 ") + value(&counts, "cnot ") + value(&counts, "x "), 6);
}

#[test]
fn empty_body_gives_empty_circuit() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("empty.twr");
    std::fs::write(&src, "fun empty() { }\n").unwrap();
    let (code, _, err) = qflow(&["compile", src.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let qc = std::fs::read_to_string(dir.path().join("empty.qc")).unwrap();
    assert!(qc.contains("BEGIN\nEND"), "{qc}");

    let (code, out, _) = qflow(&["analyze", src.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.split_whitespace().eq(["total", "0", "0", "0", "0"])), "{out}");
    assert_eq!(value(&out, "counted t"), 0);
}

#[test]
fn analyze_totals_match_counted_gates() {
    let (code, out, err) = qflow(&["analyze", &corpus("length.twr"), "--param", "n=3", "--width", "2", "--cells", "4"]);
    assert_eq!(code, 0, "{err}");
    let total: Vec<u64> = out
        .lines()
        .find_map(|l| l.strip_prefix("total"))
        .unwrap()
        .split_whitespace()
        .map(|v| v.parse().unwrap())
        .collect();
    let (mcx, t, t_exact) = (total[0], total[1], total[3]);
    assert_eq!(mcx, value(&out, "counted mcx"));
    assert_eq!(t_exact, value(&out, "counted t"));
    assert!(t >= t_exact);
}

#[test]
fn optimized_unrolled_analyzes_cheaper_than_unrolled() {
    let t = |file: &str, opt: &str| {
        let (code, out, err) = qflow(&["analyze", &corpus(file), "--param", "n=3", "--width", "2", "--opt", opt]);
        assert_eq!(code, 0, "{err}");
        value(&out, "counted t")
    };
    assert!(t("small/unrolled_flat.twr", "none") < t("small/unrolled.twr", "none"));
    assert!(t("small/unrolled.twr", "all") < t("small/unrolled.twr", "none"));
}

#[test]
fn equiv_verdicts() {
    let guarded = corpus("small/guarded.twr");
    let (code, out, _) = qflow(&["equiv", &guarded, &guarded, "--width", "1", "--opt-a", "none", "--opt-b", "all"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("verdict equivalent"));

    let (code, out, _) = qflow(&["equiv", &guarded, &corpus("small/guarded_flip.twr"), "--width", "1"]);
    assert_eq!(code, 1);
    assert!(out.contains("verdict different") && out.contains("counterexample"), "{out}");

    let length = corpus("length.twr");
    let (code, out, _) = qflow(&[
        "equiv", &length, &length, "--param", "n=2", "--width", "2", "--cells", "4", "--opt-a", "none",
    ]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn bench_reports_degrees() {
    let (code, out, err) = qflow(&["bench", &corpus("length.twr"), "--sweep", "n=2..6", "--width", "2", "--opt", "none"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("fit t degree 2"), "{out}");
    let (_, out, _) = qflow(&["bench", &corpus("pop_front.twr"), "--sweep", "n=2..5", "--width", "2"]);
    assert!(out.contains("fit t degree 0"), "{out}");
}

#[test]
fn exit_codes() {
    assert_eq!(qflow(&["--help"]).0, 0);
    assert_eq!(qflow(&["frobnicate"]).0, 1);
    assert_eq!(qflow(&["check", "/nonexistent.twr"]).0, 1);
    assert_eq!(qflow(&["check", &corpus("length.twr")]).0, 1, "unbound static parameter");
    assert_eq!(qflow(&["check", &corpus("length.twr"), "--param", "n=2"]).0, 0);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.twr");
    std::fs::write(&bad, "fun f(x: bool) { if x { had x; } }\n").unwrap();
    let (code, _, err) = qflow(&["check", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error:"), "{err}");
}

#[test]
fn binary_runs() {
    let out = Command::new(env!("CARGO_BIN_EXE_qflow")).args(["check", &corpus("small/guarded.twr")]).output().unwrap();
    assert!(out.status.success());
    let out = Command::new(env!("CARGO_BIN_EXE_qflow")).args(["check", "/nonexistent.twr"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn fit_examples() {
    let f = fit_polynomial(2, &[9, 11, 13]);
    assert_eq!(f.degree, Degree::Exact { degree: 1, verified: true });
    assert_eq!(f.render("n"), "2n + 5");
    let f = fit_polynomial(2, &[4, 9, 16, 25]);
    assert_eq!(f.degree, Degree::Exact { degree: 2, verified: true });
    assert_eq!(f.render("n"), "n^2");
}
