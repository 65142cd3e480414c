//! Past causal cones of output qubits and the width of a measurement order.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::circuit::{ensure_valid, Circuit, ClbitId, Operation, QubitId};
use crate::error::{Error, Result};

/// The past causal cone of one measured output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    pub qubit: QubitId,
    pub clbit: ClbitId,
    /// Input qubits the output depends on. Always contains `qubit`.
    pub inputs: FixedBitSet,
    /// Indices (into the circuit's op list) of gates in the cone, ascending.
    pub gates: Vec<usize>,
}

impl Cone {
    pub fn size(&self) -> usize {
        self.inputs.count_ones(..)
    }
}

/// Cones of every recorded output, sorted by output qubit index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeMap {
    num_qubits: usize,
    cones: Vec<Cone>,
    /// `position[q]` is the index of qubit `q`'s cone, if `q` is an output.
    position: Vec<Option<usize>>,
}

impl ConeMap {
    /// Builds a map from explicit cones. Gate indices are left empty when
    /// only the input sets matter (order search on synthetic instances).
    pub fn from_input_sets(num_qubits: usize, sets: Vec<(QubitId, Vec<usize>)>) -> Result<Self> {
        let mut cones = Vec::with_capacity(sets.len());
        for (i, (q, inputs)) in sets.into_iter().enumerate() {
            let mut bits = FixedBitSet::with_capacity(num_qubits);
            for p in inputs {
                if p >= num_qubits {
                    return Err(Error::InvalidArgument(format!("input q{p} out of range")));
                }
                bits.insert(p);
            }
            if q.0 >= num_qubits {
                return Err(Error::InvalidArgument(format!("output {q} out of range")));
            }
            bits.insert(q.0);
            cones.push(Cone {
                qubit: q,
                clbit: ClbitId(i),
                inputs: bits,
                gates: Vec::new(),
            });
        }
        Self::assemble(num_qubits, cones)
    }

    fn assemble(num_qubits: usize, mut cones: Vec<Cone>) -> Result<Self> {
        cones.sort_by_key(|c| c.qubit);
        let mut position = vec![None; num_qubits];
        for (i, c) in cones.iter().enumerate() {
            if position[c.qubit.0].replace(i).is_some() {
                return Err(Error::InvalidArgument(format!("{} measured twice", c.qubit)));
            }
        }
        Ok(Self {
            num_qubits,
            cones,
            position,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_outputs(&self) -> usize {
        self.cones.len()
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn outputs(&self) -> impl DoubleEndedIterator<Item = QubitId> + '_ {
        self.cones.iter().map(|c| c.qubit)
    }

    pub fn cone(&self, q: QubitId) -> Option<&Cone> {
        self.position(q).map(|i| &self.cones[i])
    }

    pub fn position(&self, q: QubitId) -> Option<usize> {
        self.position.get(q.0).copied().flatten()
    }

    /// Converts an order of qubits into cone positions, checking that it is
    /// a permutation of the outputs.
    pub fn positions_of(&self, order: &[QubitId]) -> Result<Vec<usize>> {
        if order.len() != self.cones.len() {
            return Err(Error::InvalidOrder(format!(
                "expected {} outputs, got {}",
                self.cones.len(),
                order.len()
            )));
        }
        let mut seen = vec![false; self.cones.len()];
        order
            .iter()
            .map(|&q| {
                let p = self
                    .position(q)
                    .ok_or_else(|| Error::InvalidOrder(format!("{q} is not a measured output")))?;
                if std::mem::replace(&mut seen[p], true) {
                    return Err(Error::InvalidOrder(format!("{q} appears twice")));
                }
                Ok(p)
            })
            .collect()
    }
}

/// A measurement order together with its width.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementOrder {
    pub order: Vec<QubitId>,
    pub width: usize,
}

/// Computes the past causal cone of every recorded output.
///
/// Dependencies are propagated forward: each wire carries the set of inputs
/// and gates its current state depends on, and a gate merges the sets of
/// all wires in its support. The result is the fixed point of the backward
/// sweep from each measurement.
pub fn compute_cones(circuit: &Circuit) -> Result<ConeMap> {
    ensure_valid(circuit)?;
    if !circuit.is_measurement_terminated() {
        return Err(Error::UnsupportedInput(
            "circuit already contains mid-circuit measurement or reset".into(),
        ));
    }
    let n = circuit.num_qubits();
    let num_ops = circuit.ops().len();
    let mut inputs: Vec<FixedBitSet> = vec![FixedBitSet::with_capacity(n); n];
    let mut gates: Vec<FixedBitSet> = vec![FixedBitSet::with_capacity(num_ops); n];
    let mut cones = Vec::new();

    let mut merged_inputs = FixedBitSet::with_capacity(n);
    let mut merged_gates = FixedBitSet::with_capacity(num_ops);
    for (i, op) in circuit.ops().iter().enumerate() {
        match op {
            Operation::Prepare(q) => {
                inputs[q.0].insert(q.0);
            }
            Operation::Gate(g) => {
                merged_inputs.clear();
                merged_gates.clear();
                for q in &g.qubits {
                    merged_inputs.union_with(&inputs[q.0]);
                    merged_gates.union_with(&gates[q.0]);
                }
                merged_gates.insert(i);
                for q in &g.qubits {
                    inputs[q.0].clone_from(&merged_inputs);
                    gates[q.0].clone_from(&merged_gates);
                }
            }
            Operation::Measure { qubit, clbit: Some(c) } => cones.push(Cone {
                qubit: *qubit,
                clbit: *c,
                inputs: inputs[qubit.0].clone(),
                gates: gates[qubit.0].ones().collect(),
            }),
            Operation::Measure { clbit: None, .. } | Operation::Reset(_) => {}
        }
    }
    ConeMap::assemble(n, cones)
}

/// Number of live wires just before each measurement of `order`.
///
/// Measured qubits always lie in their own cones, so the live count at
/// step `t` is the size of the cone union minus the `t` qubits measured
/// earlier.
pub fn live_profile(cones: &ConeMap, order: &[QubitId]) -> Result<Vec<usize>> {
    let positions = cones.positions_of(order)?;
    let mut union = FixedBitSet::with_capacity(cones.num_qubits());
    Ok(positions
        .iter()
        .enumerate()
        .map(|(t, &p)| {
            union.union_with(&cones.cones[p].inputs);
            union.count_ones(..) - t
        })
        .collect())
}

/// Peak number of simultaneously live wires when measuring in `order`.
pub fn width_of_order(cones: &ConeMap, order: &[QubitId]) -> Result<usize> {
    Ok(live_profile(cones, order)?.into_iter().max().unwrap_or(0))
}

/// Metadata key listing, for each qubit of a restricted circuit, the
/// original qubit it came from.
pub const RESTRICTED_QUBITS_KEY: &str = "restricted_qubits";
/// Metadata key listing, for each clbit of a restricted circuit, the
/// original clbit it came from.
pub const RESTRICTED_CLBITS_KEY: &str = "restricted_clbits";

/// The sub-circuit needed to sample only `outputs`: their cone gates, the
/// preparations of the inputs involved, and their measurements. Qubits and
/// clbits are renumbered densely in ascending original order; the original
/// labels are recorded in the metadata.
pub fn restrict_to_outputs(circuit: &Circuit, outputs: &[QubitId]) -> Result<Circuit> {
    if outputs.is_empty() {
        return Err(Error::InvalidArgument("empty output set".into()));
    }
    let cones = compute_cones(circuit)?;
    let mut keep_gate = FixedBitSet::with_capacity(circuit.ops().len());
    let mut involved = FixedBitSet::with_capacity(circuit.num_qubits());
    let mut wanted = FixedBitSet::with_capacity(circuit.num_qubits());
    for &q in outputs {
        let cone = cones
            .cone(q)
            .ok_or_else(|| Error::InvalidArgument(format!("{q} is not a measured output")))?;
        involved.union_with(&cone.inputs);
        keep_gate.extend(cone.gates.iter().copied());
        wanted.insert(q.0);
    }

    let qubit_map: Vec<usize> = involved.ones().collect();
    let mut new_qubit = vec![usize::MAX; circuit.num_qubits()];
    for (new, &old) in qubit_map.iter().enumerate() {
        new_qubit[old] = new;
    }
    let mut clbit_map: Vec<usize> = wanted.ones().map(|q| cones.cone(QubitId(q)).unwrap().clbit.0).collect();
    clbit_map.sort_unstable();
    let new_clbit = |c: ClbitId| ClbitId(clbit_map.binary_search(&c.0).unwrap());
    let remap = |q: &QubitId| QubitId(new_qubit[q.0]);

    let mut out = Circuit::new(qubit_map.len(), clbit_map.len());
    for (i, op) in circuit.ops().iter().enumerate() {
        match op {
            Operation::Prepare(q) if involved.contains(q.0) => {
                out.push(Operation::Prepare(remap(q)));
            }
            Operation::Gate(g) if keep_gate.contains(i) => {
                let mut g = g.clone();
                g.qubits = g.qubits.iter().map(remap).collect();
                out.push(Operation::Gate(g));
            }
            Operation::Measure { qubit, clbit: Some(c) } if wanted.contains(qubit.0) => {
                out.push(Operation::Measure {
                    qubit: remap(qubit),
                    clbit: Some(new_clbit(*c)),
                });
            }
            _ => {}
        }
    }
    let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
    out.metadata.insert(RESTRICTED_QUBITS_KEY.into(), join(&qubit_map));
    out.metadata.insert(RESTRICTED_CLBITS_KEY.into(), join(&clbit_map));
    Ok(out)
}
