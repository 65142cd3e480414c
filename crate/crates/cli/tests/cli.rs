use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const CHAIN3: &str = r#"{
  "version": "1",
  "num_qubits": 3,
  "num_clbits": 3,
  "ops": [
    {"kind": "prep", "qubits": [0]},
    {"kind": "prep", "qubits": [1]},
    {"kind": "prep", "qubits": [2]},
    {"kind": "gate", "qubits": [0, 1], "label": "cx"},
    {"kind": "gate", "qubits": [1, 2], "label": "cz"},
    {"kind": "measure", "qubits": [0], "clbit": 0},
    {"kind": "measure", "qubits": [1], "clbit": 1},
    {"kind": "measure", "qubits": [2], "clbit": 2}
  ]
}
"#;

fn qreuse(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qreuse")).args(args).output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad report ({e}): {}\n{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn generate(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let out = path(dir, name);
    let mut all = vec!["generate"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["-o", s(&out)]);
    let r = qreuse(&all);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    out
}

#[test]
fn chain_compiles_to_two_qubits_with_exact_search() {
    let dir = TempDir::new().unwrap();
    let input = path(&dir, "chain3.qrc.json");
    fs::write(&input, CHAIN3).unwrap();
    let output = path(&dir, "out.qrc.json");
    let r = qreuse(&["compile", s(&input), "-o", s(&output), "--strategy", "exact"]);
    assert!(r.status.success());
    let rep = report(&r);
    assert_eq!(rep["compiled_width"], 2);
    assert_eq!(rep["original_width"], 3);
    assert_eq!(rep["optimal"], true);
    assert!(rep.get("note").is_none());

    let compiled: Value = serde_json::from_str(&fs::read_to_string(&output).unwrap()).unwrap();
    let md = &compiled["metadata"];
    assert_eq!(md["physical_width"], "2");
    assert_eq!(md["strategy"], "exact");
    assert_eq!(md["source_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn bernstein_vazirani_needs_two_qubits() {
    let dir = TempDir::new().unwrap();
    let input = generate(&dir, "bv.qrc.json", &["--family", "bv", "--secret", "1011010111010010"]);
    let r = qreuse(&["compile", s(&input), "-o", s(&path(&dir, "c.qrc.json")), "--strategy", "greedy"]);
    assert!(r.status.success());
    assert_eq!(report(&r)["compiled_width"], 2);
}

#[test]
fn complete_graph_qaoa_cannot_be_compressed() {
    let dir = TempDir::new().unwrap();
    let input = generate(&dir, "k4.qrc.json", &["--family", "qaoa", "--n", "4"]);
    for strategy in ["greedy", "greedy-brute", "exact"] {
        let r = qreuse(&["compile", s(&input), "-o", s(&path(&dir, "c.qrc.json")), "--strategy", strategy]);
        let rep = report(&r);
        assert_eq!(rep["compiled_width"], 4);
        assert_eq!(rep["note"], "no compression possible");
    }
}

#[test]
fn compile_then_verify_and_detect_mutation() {
    let dir = TempDir::new().unwrap();
    let input = generate(&dir, "b.qrc.json", &["--family", "brick1d", "--n", "6", "--k", "1", "--haar-seed", "5"]);
    let compiled = path(&dir, "c.qrc.json");
    assert!(qreuse(&["compile", s(&input), "-o", s(&compiled)]).status.success());

    let ok = qreuse(&["verify", s(&input), s(&compiled)]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(report(&ok)["pass"], true);

    let same = qreuse(&["verify", s(&input), s(&input)]);
    assert_eq!(same.status.code(), Some(0));
    assert_eq!(report(&same)["tvd"], 0.0);

    let text = fs::read_to_string(&compiled).unwrap();
    let gate_line = text.lines().find(|l| l.contains("\"kind\": \"gate\"")).unwrap();
    let mutated = path(&dir, "m.qrc.json");
    fs::write(&mutated, text.replacen(&format!("{gate_line}\n"), "", 1)).unwrap();
    let bad = qreuse(&["verify", s(&input), s(&mutated)]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(report(&bad)["pass"], false);
}

#[test]
fn restricted_outputs_and_budget() {
    let dir = TempDir::new().unwrap();
    let input = generate(&dir, "b.qrc.json", &["--family", "brick1d", "--n", "8", "--k", "1", "--periodic"]);
    let out = path(&dir, "c.qrc.json");
    let r = qreuse(&["compile", s(&input), "-o", s(&out), "--outputs", "0"]);
    let rep = report(&r);
    assert_eq!(rep["original_width"], 4);

    let r = qreuse(&["compile", s(&input), "-o", s(&out), "--budget", "6"]);
    assert_eq!(report(&r)["compiled_width"], 6);
    let r = qreuse(&["compile", s(&input), "-o", s(&out), "--budget", "2", "--strict-budget"]);
    assert_eq!(r.status.code(), Some(1));
}

#[test]
fn error_exit_codes() {
    let dir = TempDir::new().unwrap();
    let broken = path(&dir, "broken.qrc.json");
    fs::write(&broken, "{\"version\": \"1\",").unwrap();
    let out = path(&dir, "o.qrc.json");
    assert_eq!(qreuse(&["compile", s(&broken), "-o", s(&out)]).status.code(), Some(2));

    let unprepared = path(&dir, "bad.qrc.json");
    fs::write(&unprepared, CHAIN3.replace("{\"kind\": \"prep\", \"qubits\": [2]},\n    ", "")).unwrap();
    assert_eq!(qreuse(&["compile", s(&unprepared), "-o", s(&out)]).status.code(), Some(3));

    let chain = path(&dir, "chain3.qrc.json");
    fs::write(&chain, CHAIN3).unwrap();
    let r = qreuse(&["verify", s(&chain), s(&chain), "--max-qubits", "2"]);
    assert_eq!(r.status.code(), Some(5));

    let qasm = path(&dir, "x.qasm");
    fs::write(&qasm, "OPENQASM 2.0;\nqreg q[1];\nu3(0,0,0) q[0];\n").unwrap();
    assert_eq!(qreuse(&["simulate", s(&qasm)]).status.code(), Some(2));
}

#[test]
fn simulate_respects_bit_order() {
    let dir = TempDir::new().unwrap();
    let qasm = path(&dir, "x.qasm");
    fs::write(&qasm, "OPENQASM 2.0;\nqreg q[2];\ncreg c[2];\nx q[0];\nmeasure q -> c;\n").unwrap();
    let left = report(&qreuse(&["simulate", s(&qasm)]));
    assert_eq!(left["10"], 1.0);
    let right = report(&qreuse(&["simulate", s(&qasm), "--bit-order", "clbit0-right"]));
    assert_eq!(right["01"], 1.0);
}

#[test]
fn analyze_reports_widths() {
    let dir = TempDir::new().unwrap();
    let input = generate(&dir, "t.qrc.json", &["--family", "ttn", "--depth", "3"]);
    let rep = report(&qreuse(&["analyze", s(&input), "--exact"]));
    assert_eq!(rep["num_qubits"], 8);
    let widths = rep["widths"].as_array().unwrap();
    assert_eq!(widths.len(), 6);
    assert!(widths.iter().all(|w| w["width"] == 4));
}

fn csv_without_elapsed(text: &str) -> Vec<String> {
    text.lines()
        .map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head).to_string())
        .collect()
}

#[test]
fn bench_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let run = |name: &str| {
        let csv = path(&dir, name);
        let r = Command::new(env!("CARGO_BIN_EXE_qreuse"))
            .args(["bench", "--N", "12,16", "--p", "1,2", "--seeds", "3", "--strategies", "greedy,greedy-brute"])
            .args(["--threshold", "8", "--csv", s(&csv)])
            .env("QREUSE_THREADS", "2")
            .output()
            .unwrap();
        assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
        (fs::read_to_string(csv).unwrap(), report(&r))
    };
    let (a, summary) = run("a.csv");
    let (b, _) = run("b.csv");
    assert_eq!(
        a.lines().next().unwrap(),
        "family,N,param,seed,strategy,via_dual,width,optimal,elapsed_s"
    );
    assert_eq!(a.lines().count(), 1 + 2 * 2 * 3 * 2);
    assert_eq!(csv_without_elapsed(&a), csv_without_elapsed(&b));
    let cells = summary.as_array().unwrap();
    assert_eq!(cells.len(), 8);
    assert!(cells.iter().all(|c| c["instances"] == 3 && c["fraction_at_or_below_threshold"].is_number()));
}

#[test]
fn bench_rejects_unknown_family() {
    let r = qreuse(&["bench", "--family", "mera", "--N", "8"]);
    assert_eq!(r.status.code(), Some(1));
}
