use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, Gate};
use crate::gates::HAAR_LABEL;
use crate::matrix::Matrix;

/// `num_gates` Haar-random two-qubit gates on uniformly random qubit pairs
/// of an `n`-qubit register; every qubit is prepared first and measured
/// last. Requires `n >= 2`.
pub fn random_circuit(n: usize, num_gates: usize, seed: u64) -> Circuit {
    assert!(n >= 2, "random circuits need at least two qubits");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Circuit::new(n, n);
    for q in 0..n {
        c.prepare(q);
    }
    for _ in 0..num_gates {
        let a = rng.random_range(0..n);
        let mut b = rng.random_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        let u = Matrix::haar_random(2, &mut rng);
        c.gate(Gate::with_matrix(HAAR_LABEL, &[a, b], u));
    }
    for q in 0..n {
        c.measure(q, q);
    }
    c
}

/// A five-qubit circuit whose dual compresses further than the circuit
/// itself under the greedy order: four wires directly, three via the dual.
/// Two-qubit gates are Haar-random from `seed`.
pub fn dual_advantage_circuit(seed: u64) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Circuit::new(5, 5);
    for q in 0..5 {
        c.prepare(q);
    }
    for &(a, b) in DUAL_ADVANTAGE_GATES {
        c.gate(Gate::with_matrix(HAAR_LABEL, &[a, b], Matrix::haar_random(2, &mut rng)));
    }
    for q in 0..5 {
        c.measure(q, q);
    }
    c
}

const DUAL_ADVANTAGE_GATES: &[(usize, usize)] = &[(0, 3), (3, 4), (2, 1), (0, 4), (1, 4)];
