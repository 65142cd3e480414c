use std::path::PathBuf;

use qreuse::gates::GateSource;
use qreuse::generators::{random_circuit, Family};
use qreuse::io::{emit_json, import_qasm2_subset, parse_json};
use qreuse::rewrite::{parse_clbit_map, CLBIT_MAP_KEY};
use qreuse::sim::{exact_distribution, DEFAULT_MAX_QUBITS};
use qreuse::{compile, Circuit, CompileOptions, Error};

fn data(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name);
    std::fs::read_to_string(path).unwrap()
}

fn bell() -> Circuit {
    let mut c = Circuit::new(2, 2);
    c.prepare(0).prepare(1).named("h", &[], &[0]).named("cx", &[], &[0, 1]);
    c.measure(0, 0).measure(1, 1);
    c
}

#[test]
fn bell_file_is_byte_stable() {
    let text = data("bell.qrc.json");
    let c = parse_json(&text).unwrap();
    assert_eq!(c, bell());
    assert_eq!(emit_json(&c).unwrap(), text);
}

#[test]
fn bell_qasm_imports_to_the_same_circuit() {
    let c = import_qasm2_subset(&data("bell.qasm")).unwrap();
    assert_eq!(c, bell());
    let d = exact_distribution(&c, DEFAULT_MAX_QUBITS).unwrap();
    assert!((d.probability(0b00) - 0.5).abs() < 1e-12);
    assert!((d.probability(0b11) - 0.5).abs() < 1e-12);
}

#[test]
fn generated_and_compiled_circuits_round_trip() {
    let mut circuits = vec![
        random_circuit(6, 10, 3),
        Family::Mera { depth: 3 }.generate(GateSource::SeededHaarRandom { seed: 4 }).unwrap(),
        Family::Qaoa { n: 10, p: 2, seed: 1 }.generate(GateSource::NamedFixed).unwrap(),
    ];
    let compiled = compile(&circuits[0], &CompileOptions::default()).unwrap();
    circuits.push(compiled.compiled.circuit);
    for c in circuits {
        let text = emit_json(&c).unwrap();
        let back = parse_json(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(emit_json(&back).unwrap(), text);
    }
}

#[test]
fn compiled_metadata_survives_serialization() {
    let c = random_circuit(5, 8, 9);
    let out = compile(&c, &CompileOptions::default()).unwrap();
    let back = parse_json(&emit_json(&out.compiled.circuit).unwrap()).unwrap();
    let map = parse_clbit_map(&back.metadata[CLBIT_MAP_KEY]).unwrap();
    assert_eq!(map, out.compiled.clbit_map);
}

#[test]
fn malformed_inputs_are_rejected() {
    assert!(matches!(parse_json("{\"version\": \"1\",").unwrap_err(), Error::Syntax { .. }));
    let wrong_version = data("bell.qrc.json").replace("\"version\": \"1\"", "\"version\": \"9\"");
    assert!(matches!(parse_json(&wrong_version).unwrap_err(), Error::UnsupportedInput(_)));
    let bad_qubit = data("bell.qrc.json").replace("[0, 1], \"label\": \"cx\"", "[0, 7], \"label\": \"cx\"");
    assert!(parse_json(&bad_qubit).is_err());
    let err = import_qasm2_subset("OPENQASM 2.0;\nqreg q[1];\nu3(0,0,0) q[0];\n").unwrap_err();
    assert!(matches!(err, Error::UnsupportedStatement { line: 3, .. }));
}
