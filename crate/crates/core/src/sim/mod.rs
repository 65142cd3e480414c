//! Exact simulation oracle.
//!
//! Circuits are simulated as state vectors; every measurement, reset or
//! re-preparation branches into both outcomes weighted by their Born
//! probabilities, so the returned distribution is exact rather than
//! sampled.

mod statevector;

use std::collections::BTreeMap;

pub use statevector::StateVector;

use crate::circuit::{ensure_valid, Circuit, ClbitId, Operation, QubitId};
use crate::error::{Error, Result};
use crate::generators::Graph;
use crate::matrix::Matrix;
use crate::rewrite::{parse_clbit_map, CompiledCircuit, CLBIT_MAP_KEY};

/// Default cap on simulated qubits.
pub const DEFAULT_MAX_QUBITS: usize = 14;
/// Widest gate the simulator accepts.
pub const MAX_GATE_ARITY: usize = 4;
/// Branches whose conditional probability is below this are dropped.
pub const BRANCH_CUTOFF: f64 = 1e-14;

/// Exact outcome distribution over `num_clbits` classical bits. Bit `i` of
/// a key is clbit `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    num_clbits: usize,
    probs: BTreeMap<u64, f64>,
}

/// How bitstrings are written when a distribution is printed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum BitOrder {
    /// Clbit 0 is the leftmost character.
    #[default]
    ClbitZeroLeft,
    /// Clbit 0 is the rightmost character.
    ClbitZeroRight,
}

impl Distribution {
    pub fn new(num_clbits: usize, probs: BTreeMap<u64, f64>) -> Result<Self> {
        if num_clbits > 64 {
            return Err(Error::OracleLimit(format!("{num_clbits} clbits exceed 64")));
        }
        Ok(Self { num_clbits, probs })
    }

    pub fn num_clbits(&self) -> usize {
        self.num_clbits
    }

    pub fn probabilities(&self) -> &BTreeMap<u64, f64> {
        &self.probs
    }

    pub fn probability(&self, outcome: u64) -> f64 {
        self.probs.get(&outcome).copied().unwrap_or(0.0)
    }

    pub fn support_size(&self) -> usize {
        self.probs.len()
    }

    pub fn total(&self) -> f64 {
        self.probs.values().sum()
    }

    /// Probability of `bits` (clbit 0 first).
    pub fn probability_of_bits(&self, bits: &[bool]) -> f64 {
        self.probability(bits.iter().enumerate().map(|(i, &b)| (b as u64) << i).sum())
    }

    pub fn bitstring(&self, outcome: u64, order: BitOrder) -> String {
        let mut s: String = (0..self.num_clbits)
            .map(|i| if outcome >> i & 1 == 1 { '1' } else { '0' })
            .collect();
        if order == BitOrder::ClbitZeroRight {
            s = s.chars().rev().collect();
        }
        s
    }

    /// Bitstring → probability map with keys in sorted order.
    pub fn to_bitstring_map(&self, order: BitOrder) -> BTreeMap<String, f64> {
        self.probs
            .iter()
            .map(|(&k, &p)| (self.bitstring(k, order), p))
            .collect()
    }

    /// Moves bit `from` of every outcome to bit `to`, dropping bits not
    /// listed, in a space of `num_clbits` bits.
    pub fn relabel(&self, pairs: &[(ClbitId, ClbitId)], num_clbits: usize) -> Result<Self> {
        let mut probs = BTreeMap::new();
        for (&k, &p) in &self.probs {
            let key = pairs
                .iter()
                .filter(|(from, _)| k >> from.0 & 1 == 1)
                .map(|(_, to)| 1u64 << to.0)
                .sum();
            *probs.entry(key).or_insert(0.0) += p;
        }
        Self::new(num_clbits, probs)
    }
}

/// Total variation distance `½ Σ |a(x) − b(x)|`.
pub fn tvd(a: &Distribution, b: &Distribution) -> Result<f64> {
    if a.num_clbits != b.num_clbits {
        return Err(Error::InvalidArgument(format!(
            "distributions over {} and {} clbits",
            a.num_clbits, b.num_clbits
        )));
    }
    let mut sum = 0.0;
    for (k, p) in &a.probs {
        sum += (p - b.probability(*k)).abs();
    }
    for (k, p) in &b.probs {
        if !a.probs.contains_key(k) {
            sum += p;
        }
    }
    Ok(sum / 2.0)
}

struct Simulator<'a> {
    ops: &'a [Operation],
    unitaries: Vec<Option<(Matrix, Vec<usize>)>>,
    probs: BTreeMap<u64, f64>,
    leaves: usize,
}

impl Simulator<'_> {
    fn run(&mut self, mut state: StateVector, mut bits: u64, weight: f64, from: usize) {
        for i in from..self.ops.len() {
            match &self.ops[i] {
                Operation::Gate(_) => {
                    let (u, qs) = self.unitaries[i].as_ref().expect("gate unitary resolved");
                    state.apply(u, qs);
                }
                Operation::Measure { qubit, clbit } => {
                    let q = qubit.0;
                    let p1 = state.probability_one(q).clamp(0.0, 1.0);
                    let branches = [(false, 1.0 - p1), (true, p1)];
                    let live: Vec<_> = branches.into_iter().filter(|(_, p)| *p >= BRANCH_CUTOFF).collect();
                    let mut live = live.into_iter();
                    let first = live.next().expect("some outcome has probability");
                    for (outcome, p) in live {
                        let mut s = state.clone();
                        s.project(q, outcome, p);
                        let b = record(bits, *clbit, outcome);
                        self.run(s, b, weight * p, i + 1);
                    }
                    let (outcome, p) = first;
                    state.project(q, outcome, p);
                    bits = record(bits, *clbit, outcome);
                    return self.run(state, bits, weight * p, i + 1);
                }
                Operation::Prepare(q) | Operation::Reset(q) => {
                    let q = q.0;
                    let p1 = state.probability_one(q).clamp(0.0, 1.0);
                    if p1 < BRANCH_CUTOFF {
                        continue;
                    }
                    if 1.0 - p1 >= BRANCH_CUTOFF {
                        let mut s = state.clone();
                        s.project(q, false, 1.0 - p1);
                        self.run(s, bits, weight * (1.0 - p1), i + 1);
                    }
                    state.project(q, true, p1);
                    state.flip(q);
                    return self.run(state, bits, weight * p1, i + 1);
                }
            }
        }
        self.leaves += 1;
        *self.probs.entry(bits).or_insert(0.0) += weight;
    }
}

fn record(bits: u64, clbit: Option<ClbitId>, outcome: bool) -> u64 {
    match clbit {
        Some(c) if outcome => bits | 1 << c.0,
        _ => bits,
    }
}

/// Exact distribution with the number of simulated branches.
pub fn simulate(circuit: &Circuit, max_qubits: usize) -> Result<(Distribution, usize)> {
    ensure_valid(circuit)?;
    if circuit.num_qubits() > max_qubits {
        return Err(Error::OracleLimit(format!(
            "{} qubits exceed the simulation limit of {max_qubits}",
            circuit.num_qubits()
        )));
    }
    if circuit.num_clbits() > 64 {
        return Err(Error::OracleLimit(format!("{} clbits exceed 64", circuit.num_clbits())));
    }
    let mut unitaries = Vec::with_capacity(circuit.ops().len());
    for (i, op) in circuit.ops().iter().enumerate() {
        unitaries.push(match op {
            Operation::Gate(g) => {
                if g.arity() > MAX_GATE_ARITY {
                    return Err(Error::OracleLimit(format!(
                        "op {i}: {}-qubit gate exceeds the simulated arity limit of {MAX_GATE_ARITY}",
                        g.arity()
                    )));
                }
                let u = g.unitary().ok_or_else(|| {
                    Error::UnsupportedInput(format!("op {i}: gate {:?} has no matrix", g.label))
                })?;
                Some((u, g.qubits.iter().map(|q| q.0).collect()))
            }
            _ => None,
        });
    }
    let mut sim = Simulator {
        ops: circuit.ops(),
        unitaries,
        probs: BTreeMap::new(),
        leaves: 0,
    };
    sim.run(StateVector::zero(circuit.num_qubits()), 0, 1.0, 0);
    let leaves = sim.leaves;
    Ok((Distribution::new(circuit.num_clbits(), sim.probs)?, leaves))
}

/// Exact outcome distribution of `circuit`.
pub fn exact_distribution(circuit: &Circuit, max_qubits: usize) -> Result<Distribution> {
    Ok(simulate(circuit, max_qubits)?.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub pass: bool,
    pub tvd: f64,
    pub original_support: usize,
    pub compiled_support: usize,
}

/// Compares `original` with a compiled circuit whose clbit `map[q]` holds
/// the outcome of original output `q`. Only outputs listed in `map` are
/// compared; the original distribution is marginalized onto them.
pub fn verify_with_map(
    original: &Circuit,
    compiled: &Circuit,
    map: &BTreeMap<QubitId, ClbitId>,
    tol: f64,
    max_qubits: usize,
) -> Result<EquivalenceReport> {
    let outcome: BTreeMap<QubitId, ClbitId> = original.measurements().into_iter().collect();
    let mut keep = Vec::with_capacity(map.len());
    let mut move_compiled = Vec::with_capacity(map.len());
    for (q, &kc) in map {
        let co = *outcome
            .get(q)
            .ok_or_else(|| Error::InvalidArgument(format!("{q} is not an output of the original circuit")))?;
        if kc.0 >= compiled.num_clbits() {
            return Err(Error::InvalidArgument(format!("{kc} is not a clbit of the compiled circuit")));
        }
        keep.push((co, co));
        move_compiled.push((kc, co));
    }
    let n = original.num_clbits();
    let a = exact_distribution(original, max_qubits)?.relabel(&keep, n)?;
    let b = exact_distribution(compiled, max_qubits)?.relabel(&move_compiled, n)?;
    let d = tvd(&a, &b)?;
    Ok(EquivalenceReport {
        pass: d < tol,
        tvd: d,
        original_support: a.support_size(),
        compiled_support: b.support_size(),
    })
}

/// Checks a compiled circuit against its source. The clbit map is read
/// from the compiled circuit's metadata; without one, original output `q`
/// is expected on the clbit it used originally.
pub fn verify_circuits(original: &Circuit, compiled: &Circuit, tol: f64, max_qubits: usize) -> Result<EquivalenceReport> {
    let map = match compiled.metadata.get(CLBIT_MAP_KEY) {
        Some(text) => parse_clbit_map(text)?,
        None => original.measurements().into_iter().collect(),
    };
    verify_with_map(original, compiled, &map, tol, max_qubits)
}

/// Checks that `compiled` samples the same outputs as `original`.
pub fn verify_equivalence(original: &Circuit, compiled: &CompiledCircuit, tol: f64) -> Result<EquivalenceReport> {
    verify_with_map(original, &compiled.circuit, &compiled.clbit_map, tol, DEFAULT_MAX_QUBITS)
}

/// Total weight of edges whose endpoints differ in `bits`.
pub fn cut_value(graph: &Graph, bits: &[bool]) -> Result<f64> {
    if bits.len() != graph.num_vertices() {
        return Err(Error::InvalidArgument(format!(
            "bitstring has {} bits for {} vertices",
            bits.len(),
            graph.num_vertices()
        )));
    }
    Ok(graph
        .edges()
        .iter()
        .zip(graph.weights())
        .filter(|((u, v), _)| bits[*u] != bits[*v])
        .map(|(_, w)| w)
        .sum())
}

/// Mean cut value under `dist`, reading clbit `i` as vertex `i`.
pub fn expected_cut(dist: &Distribution, graph: &Graph) -> Result<f64> {
    let n = graph.num_vertices();
    if dist.num_clbits() != n {
        return Err(Error::InvalidArgument(format!(
            "distribution over {} clbits for {n} vertices",
            dist.num_clbits()
        )));
    }
    let mut total = 0.0;
    for (&k, &p) in dist.probabilities() {
        let bits: Vec<bool> = (0..n).map(|i| k >> i & 1 == 1).collect();
        total += p * cut_value(graph, &bits)?;
    }
    Ok(total)
}
