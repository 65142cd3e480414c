use std::time::Duration;

use num_complex::Complex64;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qreuse::causal::{compute_cones, restrict_to_outputs, width_of_order, MeasurementOrder};
use qreuse::generators::{
    bernstein_vazirani, qaoa_maxcut, qaoa_u3r, random_circuit, random_u3r_graph, Graph,
};
use qreuse::matrix::Matrix;
use qreuse::order::{compile_order, exact_order, greedy_brute_first, Strategy};
use qreuse::rewrite::{rewrite, rewrite_via_dual, rewrite_with, AllocationPolicy, RewriteOptions};
use qreuse::sim::{
    exact_distribution, expected_cut, verify_circuits, verify_equivalence, DEFAULT_MAX_QUBITS,
};
use qreuse::{compile, dual, Circuit, ClbitId, CompileOptions, Error, Gate, Operation, QubitId};

const TOL: f64 = 1e-9;

fn marginal(c: &Circuit, clbit: ClbitId) -> f64 {
    let d = exact_distribution(c, DEFAULT_MAX_QUBITS).unwrap();
    d.relabel(&[(clbit, ClbitId(0))], 1).unwrap().probability(1)
}

/// Inserts a random single-qubit unitary right after qubit `q`'s preparation.
fn perturb_input(c: &Circuit, q: usize, seed: u64) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = Matrix::haar_random(1, &mut rng);
    let mut ops = Vec::new();
    for op in c.ops() {
        ops.push(op.clone());
        if matches!(op, Operation::Prepare(p) if p.0 == q) {
            ops.push(Operation::Gate(Gate::with_matrix("U", &[q], u.clone())));
        }
    }
    Circuit::from_ops(c.num_qubits(), c.num_clbits(), ops)
}

#[test]
fn inputs_outside_a_cone_do_not_influence_its_output() {
    for seed in 0..12 {
        let c = random_circuit(6, 5, seed);
        let cones = compute_cones(&c).unwrap();
        for cone in cones.cones() {
            let base = marginal(&c, cone.clbit);
            for j in (0..6).filter(|j| !cone.inputs.contains(*j)) {
                let p = marginal(&perturb_input(&c, j, seed * 31 + j as u64), cone.clbit);
                assert!((p - base).abs() < 1e-12, "seed {seed}: input {j} reaches {}", cone.qubit);
            }
        }
    }
}

#[test]
fn every_strategy_and_policy_preserves_the_distribution() {
    for seed in 0..25 {
        let n = 3 + (seed as usize % 5);
        let c = random_circuit(n, 3 * n, 40 + seed);
        for strategy in [Strategy::Greedy, Strategy::GreedyBruteFirst, Strategy::Exact, Strategy::BruteForce] {
            for use_dual in [false, true] {
                for policy in [
                    AllocationPolicy::ReuseFirst,
                    AllocationPolicy::NewFirstUntil(n),
                    AllocationPolicy::NewFirstUntil(n - 1),
                ] {
                    let opts = CompileOptions {
                        strategy,
                        use_dual,
                        policy,
                        time_limit: Some(Duration::from_secs(30)),
                        ..Default::default()
                    };
                    let out = compile(&c, &opts).unwrap();
                    let r = verify_equivalence(&c, &out.compiled, TOL).unwrap();
                    assert!(r.pass, "seed {seed} {strategy} dual={use_dual} {policy}: tvd {}", r.tvd);
                }
            }
        }
    }
}

#[test]
fn dual_orders_compile_to_equivalent_circuits() {
    for seed in 0..20 {
        let c = random_circuit(5, 8, 300 + seed);
        let cones = compute_cones(&dual(&c).unwrap()).unwrap();
        let order = greedy_brute_first(&cones);
        let compiled = rewrite_via_dual(&c, &order, AllocationPolicy::ReuseFirst).unwrap();
        assert!(compiled.via_dual);
        assert_eq!(compiled.physical_width, order.width);
        assert!(verify_equivalence(&c, &compiled, TOL).unwrap().pass, "seed {seed}");
    }
}

#[test]
fn final_resets_keep_equivalence() {
    let c = random_circuit(5, 9, 77);
    let order = greedy_brute_first(&compute_cones(&c).unwrap());
    let opts = RewriteOptions {
        final_resets: true,
        ..Default::default()
    };
    let compiled = rewrite_with(&c, &order, AllocationPolicy::ReuseFirst, opts).unwrap();
    assert!(compiled.circuit.count_kind("reset") > compiled.reuse_count());
    assert!(verify_equivalence(&c, &compiled, TOL).unwrap().pass);
}

#[test]
fn strict_budget_below_width_is_an_error() {
    let c = random_circuit(6, 12, 5);
    let order = greedy_brute_first(&compute_cones(&c).unwrap());
    let opts = RewriteOptions {
        strict_budget: true,
        ..Default::default()
    };
    let err = rewrite_with(&c, &order, AllocationPolicy::NewFirstUntil(order.width - 1), opts).unwrap_err();
    assert!(matches!(err, Error::BudgetTooSmall { .. }));
    let ok = rewrite_with(&c, &order, AllocationPolicy::NewFirstUntil(order.width), opts).unwrap();
    assert_eq!(ok.physical_width, order.width);
}

#[test]
fn deleting_a_gate_is_detected() {
    let c = random_circuit(5, 8, 11);
    let order = greedy_brute_first(&compute_cones(&c).unwrap());
    let compiled = rewrite(&c, &order, AllocationPolicy::ReuseFirst).unwrap();
    assert!(verify_circuits(&c, &compiled.circuit, TOL, DEFAULT_MAX_QUBITS).unwrap().pass);

    let first_gate = compiled
        .circuit
        .ops()
        .iter()
        .position(|op| matches!(op, Operation::Gate(_)))
        .unwrap();
    let mut ops = compiled.circuit.ops().to_vec();
    ops.remove(first_gate);
    let mut mutated = Circuit::from_ops(compiled.circuit.num_qubits(), compiled.circuit.num_clbits(), ops);
    mutated.metadata = compiled.circuit.metadata.clone();
    let r = verify_circuits(&c, &mutated, TOL, DEFAULT_MAX_QUBITS).unwrap();
    assert!(!r.pass);
    assert!(r.tvd > 1e-3);
}

#[test]
fn restricted_outputs_compile_and_verify() {
    let c = random_circuit(7, 10, 21);
    let keep = [QubitId(1), QubitId(4)];
    let r = restrict_to_outputs(&c, &keep).unwrap();
    let compiled = compile(&r, &CompileOptions::default()).unwrap();
    assert!(compiled.compiled.physical_width <= r.num_qubits());
    assert!(verify_equivalence(&r, &compiled.compiled, TOL).unwrap().pass);
}

#[test]
fn bernstein_vazirani_needs_two_wires_and_reads_the_secret() {
    let secret = "1101001";
    let c = bernstein_vazirani(secret.len(), secret).unwrap();
    let out = compile(&c, &CompileOptions::default()).unwrap();
    assert_eq!(out.compiled.physical_width, 2);
    let d = exact_distribution(&out.compiled.circuit, DEFAULT_MAX_QUBITS).unwrap();
    let bits: Vec<bool> = secret.chars().map(|ch| ch == '1').collect();
    assert!((d.probability_of_bits(&bits) - 1.0).abs() < 1e-12);
}

#[test]
fn qaoa_at_zero_angles_cuts_half_the_edges() {
    let g = Graph::complete(4);
    let c = qaoa_maxcut(&g, &[0.0], &[0.0]).unwrap();
    let d = exact_distribution(&c, DEFAULT_MAX_QUBITS).unwrap();
    assert!((expected_cut(&d, &g).unwrap() - 3.0).abs() < 1e-12);
    let out = compile(&c, &CompileOptions::default()).unwrap();
    assert_eq!(out.compiled.physical_width, 4);
}

#[test]
fn compiled_qaoa_has_the_same_expected_cut() {
    let g = random_u3r_graph(10, 3).unwrap();
    let c = qaoa_maxcut(&g, &[0.4], &[0.9]).unwrap();
    let out = compile(&c, &CompileOptions::default()).unwrap();
    assert!(out.compiled.physical_width < 10);
    let original = expected_cut(&exact_distribution(&c, DEFAULT_MAX_QUBITS).unwrap(), &g).unwrap();
    let compiled_dist = exact_distribution(&out.compiled.circuit, DEFAULT_MAX_QUBITS).unwrap();
    let pairs: Vec<(ClbitId, ClbitId)> = out
        .compiled
        .clbit_map
        .iter()
        .map(|(q, &c)| (c, ClbitId(q.0)))
        .collect();
    let moved = compiled_dist.relabel(&pairs, 10).unwrap();
    let compiled = expected_cut(&moved, &g).unwrap();
    assert!((original - compiled).abs() < 1e-9);
}

/// Expected cut of `prod_n exp(-iβ_n ΣX) exp(-iγ_n H_C) |+…+⟩` with
/// `H_C = ½Σ w(1 - ZZ)`, i.e. the cut function itself, built directly on
/// a dense state vector.
fn reference_expected_cut(g: &Graph, betas: &[f64], gammas: &[f64]) -> f64 {
    let n = g.num_vertices();
    let dim = 1usize << n;
    let cut = |z: usize| -> f64 {
        g.edges()
            .iter()
            .zip(g.weights())
            .filter(|((u, v), _)| (z >> u & 1) != (z >> v & 1))
            .map(|(_, w)| w)
            .sum()
    };
    let mut psi = vec![Complex64::new(1.0 / (dim as f64).sqrt(), 0.0); dim];
    for (&beta, &gamma) in betas.iter().zip(gammas) {
        for (z, a) in psi.iter_mut().enumerate() {
            *a *= Complex64::from_polar(1.0, -gamma * cut(z));
        }
        let (c, s) = (Complex64::new(beta.cos(), 0.0), Complex64::new(0.0, -beta.sin()));
        for q in 0..n {
            for z in (0..dim).filter(|z| z >> q & 1 == 0) {
                let (a0, a1) = (psi[z], psi[z | 1 << q]);
                psi[z] = c * a0 + s * a1;
                psi[z | 1 << q] = s * a0 + c * a1;
            }
        }
    }
    psi.iter().enumerate().map(|(z, a)| a.norm_sqr() * cut(z)).sum()
}

#[test]
fn qaoa_circuit_matches_the_cost_and_mixer_unitaries() {
    let graphs = [
        Graph::complete(4),
        random_u3r_graph(6, 2).unwrap(),
        Graph::weighted(3, vec![(0, 1, 1.5), (1, 2, 0.5)]).unwrap(),
    ];
    for g in &graphs {
        for (betas, gammas) in [(vec![0.3], vec![0.7]), (vec![-0.4, 1.1], vec![0.2, -0.9])] {
            let c = qaoa_maxcut(g, &betas, &gammas).unwrap();
            let got = expected_cut(&exact_distribution(&c, DEFAULT_MAX_QUBITS).unwrap(), g).unwrap();
            let want = reference_expected_cut(g, &betas, &gammas);
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
    }
}

#[test]
fn deeper_qaoa_is_harder_to_compress() {
    for seed in 0..5 {
        let w = |p| {
            let (_, c) = qaoa_u3r(40, p, seed).unwrap();
            compile_order(&c, Strategy::GreedyBruteFirst, true, None).unwrap().width()
        };
        let (w1, w2) = (w(1), w(2));
        assert!(w1 < w2, "seed {seed}: p=1 {w1}, p=2 {w2}");
        assert!(w2 <= 40);
    }
}

#[test]
fn exact_improves_a_bad_hint() {
    let c = random_circuit(8, 12, 8);
    let cones = compute_cones(&c).unwrap();
    let identity: Vec<QubitId> = cones.outputs().collect();
    let hint_width = width_of_order(&cones, &identity).unwrap();
    let r = exact_order(&cones, Duration::from_secs(30), Some(&identity)).unwrap();
    assert!(r.optimal);
    assert!(r.width() <= hint_width);
    let order = MeasurementOrder {
        order: r.order.order.clone(),
        width: r.width(),
    };
    let compiled = rewrite(&c, &order, AllocationPolicy::ReuseFirst).unwrap();
    assert_eq!(compiled.physical_width, r.width());
}
