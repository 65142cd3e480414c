//! Circuit intermediate representation.
//!
//! A [`Circuit`] is a time-ordered list of [`Operation`]s over a declared
//! number of qubits and classical bits. Each qubit wire is a sequence of
//! live segments: a segment opens with `Prepare` (or `Reset` on a measured
//! wire) and closes with `Measure`, or stays open until the end of the
//! circuit, in which case the qubit is traced out.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{dagger_label, library_matrix};
use crate::matrix::{Matrix, UNITARY_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QubitId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClbitId(pub usize);

impl QubitId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl ClbitId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for QubitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.0)
    }
}

impl fmt::Display for ClbitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

/// A unitary gate application.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub label: String,
    /// Angles in radians.
    pub params: Vec<f64>,
    pub qubits: Vec<QubitId>,
    pub matrix: Option<Matrix>,
}

impl Gate {
    /// A gate from the standard library; the matrix is attached when the
    /// label is known.
    pub fn named(label: &str, params: &[f64], qubits: &[usize]) -> Self {
        Self {
            label: label.to_string(),
            params: params.to_vec(),
            matrix: library_matrix(label, params, qubits.len()),
            qubits: qubits.iter().copied().map(QubitId).collect(),
        }
    }

    pub fn with_matrix(label: &str, qubits: &[usize], matrix: Matrix) -> Self {
        Self {
            label: label.to_string(),
            params: Vec::new(),
            qubits: qubits.iter().copied().map(QubitId).collect(),
            matrix: Some(matrix),
        }
    }

    pub fn arity(&self) -> usize {
        self.qubits.len()
    }

    /// The gate's unitary: the attached matrix, else the library definition.
    pub fn unitary(&self) -> Option<Matrix> {
        self.matrix
            .clone()
            .or_else(|| library_matrix(&self.label, &self.params, self.arity()))
    }

    pub fn adjoint(&self) -> Gate {
        Gate {
            label: dagger_label(&self.label),
            params: self.params.clone(),
            qubits: self.qubits.clone(),
            matrix: self.matrix.as_ref().map(Matrix::adjoint),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Operation {
    /// Initialize the qubit to |0⟩.
    Prepare(QubitId),
    Gate(Gate),
    /// Computational-basis measurement. `clbit: None` discards the outcome.
    Measure { qubit: QubitId, clbit: Option<ClbitId> },
    /// Measure-and-discard followed by preparation of |0⟩.
    Reset(QubitId),
}

impl Operation {
    pub fn qubits(&self) -> &[QubitId] {
        match self {
            Operation::Prepare(q) | Operation::Reset(q) => std::slice::from_ref(q),
            Operation::Measure { qubit, .. } => std::slice::from_ref(qubit),
            Operation::Gate(g) => &g.qubits,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Operation::Prepare(_) => "prep",
            Operation::Gate(_) => "gate",
            Operation::Measure { .. } => "measure",
            Operation::Reset(_) => "reset",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    num_clbits: usize,
    ops: Vec<Operation>,
    pub metadata: BTreeMap<String, String>,
}

impl Circuit {
    pub fn new(num_qubits: usize, num_clbits: usize) -> Self {
        Self {
            num_qubits,
            num_clbits,
            ops: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn from_ops(num_qubits: usize, num_clbits: usize, ops: Vec<Operation>) -> Self {
        Self {
            num_qubits,
            num_clbits,
            ops,
            metadata: BTreeMap::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_clbits(&self) -> usize {
        self.num_clbits
    }

    pub fn ops(&self) -> &[Operation] {
        &self.ops
    }

    pub fn into_ops(self) -> Vec<Operation> {
        self.ops
    }

    pub fn push(&mut self, op: Operation) -> &mut Self {
        self.ops.push(op);
        self
    }

    pub fn prepare(&mut self, q: usize) -> &mut Self {
        self.push(Operation::Prepare(QubitId(q)))
    }

    pub fn gate(&mut self, gate: Gate) -> &mut Self {
        self.push(Operation::Gate(gate))
    }

    pub fn named(&mut self, label: &str, params: &[f64], qubits: &[usize]) -> &mut Self {
        self.gate(Gate::named(label, params, qubits))
    }

    pub fn measure(&mut self, q: usize, c: usize) -> &mut Self {
        self.push(Operation::Measure {
            qubit: QubitId(q),
            clbit: Some(ClbitId(c)),
        })
    }

    pub fn reset(&mut self, q: usize) -> &mut Self {
        self.push(Operation::Reset(QubitId(q)))
    }

    pub fn gates(&self) -> impl Iterator<Item = (usize, &Gate)> {
        self.ops.iter().enumerate().filter_map(|(i, op)| match op {
            Operation::Gate(g) => Some((i, g)),
            _ => None,
        })
    }

    pub fn gate_count(&self) -> usize {
        self.gates().count()
    }

    pub fn count_kind(&self, kind: &str) -> usize {
        self.ops.iter().filter(|op| op.kind() == kind).count()
    }

    /// Recorded measurements as `(qubit, clbit)` pairs, in time order.
    pub fn measurements(&self) -> Vec<(QubitId, ClbitId)> {
        self.ops
            .iter()
            .filter_map(|op| match op {
                Operation::Measure { qubit, clbit: Some(c) } => Some((*qubit, *c)),
                _ => None,
            })
            .collect()
    }

    /// Number of distinct qubits that are ever prepared.
    pub fn used_qubits(&self) -> usize {
        let mut seen = vec![false; self.num_qubits];
        for op in &self.ops {
            for q in op.qubits() {
                if let Some(s) = seen.get_mut(q.0) {
                    *s = true;
                }
            }
        }
        seen.into_iter().filter(|s| *s).count()
    }

    /// True when no qubit is measured or reset mid-circuit: every wire has
    /// at most one live segment and nothing follows its measurement.
    pub fn is_measurement_terminated(&self) -> bool {
        let mut state = vec![WireState::Unprepared; self.num_qubits];
        for op in &self.ops {
            match op {
                Operation::Reset(_) => return false,
                Operation::Prepare(q) => {
                    if state[q.0] != WireState::Unprepared {
                        return false;
                    }
                    state[q.0] = WireState::Live;
                }
                Operation::Measure { qubit, .. } => {
                    if state[qubit.0] != WireState::Live {
                        return false;
                    }
                    state[qubit.0] = WireState::Measured;
                }
                Operation::Gate(g) => {
                    if g.qubits.iter().any(|q| state[q.0] != WireState::Live) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Human-readable one-line-per-op listing.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        for op in &self.ops {
            let line = match op {
                Operation::Prepare(q) => format!("prep {q}"),
                Operation::Reset(q) => format!("reset {q}"),
                Operation::Measure { qubit, clbit: Some(c) } => format!("measure {qubit} -> {c}"),
                Operation::Measure { qubit, clbit: None } => format!("discard {qubit}"),
                Operation::Gate(g) => {
                    let qs: Vec<String> = g.qubits.iter().map(|q| q.to_string()).collect();
                    format!("{} {}", g.label, qs.join(","))
                }
            };
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum WireState {
    Unprepared,
    Live,
    Measured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    QubitOutOfRange,
    ClbitOutOfRange,
    DuplicateQubit,
    EmptyGate,
    MatrixDimension,
    MatrixNotUnitary,
    /// An operation touched a qubit before it was prepared.
    Unprepared,
    /// A gate or measurement touched a qubit after its measurement.
    AfterMeasure,
    /// `Prepare` on a qubit that is already live.
    DoublePrepare,
    ClbitRewritten,
    ClbitUnwritten,
}

impl Rule {
    pub fn describe(self) -> &'static str {
        match self {
            Rule::QubitOutOfRange => "qubit index out of range",
            Rule::ClbitOutOfRange => "clbit index out of range",
            Rule::DuplicateQubit => "duplicate qubit",
            Rule::EmptyGate => "gate acts on no qubits",
            Rule::MatrixDimension => "matrix dimension does not match gate arity",
            Rule::MatrixNotUnitary => "matrix is not unitary",
            Rule::Unprepared => "qubit used before preparation",
            Rule::AfterMeasure => "qubit used after measurement without reset",
            Rule::DoublePrepare => "prepare on a live qubit",
            Rule::ClbitRewritten => "clbit written by more than one measurement",
            Rule::ClbitUnwritten => "clbit never written",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// `None` for whole-circuit rules such as an unwritten clbit.
    pub op_index: Option<usize>,
    pub rule: Rule,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.op_index {
            Some(i) => write!(f, "op {i}: {} ({})", self.rule.describe(), self.detail),
            None => write!(f, "{} ({})", self.rule.describe(), self.detail),
        }
    }
}

/// Checks every structural invariant; the returned list is empty iff the
/// circuit is well-formed.
pub fn validate(circuit: &Circuit) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut state = vec![WireState::Unprepared; circuit.num_qubits];
    let mut writes = vec![0usize; circuit.num_clbits];
    let mut push = |i: usize, rule: Rule, detail: String| {
        out.push(Violation {
            op_index: Some(i),
            rule,
            detail,
        })
    };

    for (i, op) in circuit.ops.iter().enumerate() {
        if let Some(q) = op.qubits().iter().find(|q| q.0 >= circuit.num_qubits) {
            push(i, Rule::QubitOutOfRange, format!("{q} >= {}", circuit.num_qubits));
            continue;
        }
        match op {
            Operation::Prepare(q) => {
                if state[q.0] == WireState::Live {
                    push(i, Rule::DoublePrepare, q.to_string());
                }
                state[q.0] = WireState::Live;
            }
            Operation::Reset(q) => {
                if state[q.0] == WireState::Unprepared {
                    push(i, Rule::Unprepared, q.to_string());
                }
                state[q.0] = WireState::Live;
            }
            Operation::Measure { qubit, clbit } => {
                match state[qubit.0] {
                    WireState::Unprepared => push(i, Rule::Unprepared, qubit.to_string()),
                    WireState::Measured => push(i, Rule::AfterMeasure, qubit.to_string()),
                    WireState::Live => {}
                }
                state[qubit.0] = WireState::Measured;
                if let Some(c) = clbit {
                    match writes.get_mut(c.0) {
                        None => push(i, Rule::ClbitOutOfRange, format!("{c} >= {}", circuit.num_clbits)),
                        Some(w) => {
                            *w += 1;
                            if *w > 1 {
                                push(i, Rule::ClbitRewritten, c.to_string());
                            }
                        }
                    }
                }
            }
            Operation::Gate(g) => {
                if g.qubits.is_empty() {
                    push(i, Rule::EmptyGate, g.label.clone());
                    continue;
                }
                let mut sorted = g.qubits.clone();
                sorted.sort();
                if sorted.windows(2).any(|w| w[0] == w[1]) {
                    push(i, Rule::DuplicateQubit, g.label.clone());
                }
                if let Some(m) = &g.matrix {
                    if m.arity() != Some(g.arity()) {
                        push(i, Rule::MatrixDimension, format!("{} for arity {}", m.dim(), g.arity()));
                    } else if !m.is_unitary(UNITARY_TOL) {
                        push(i, Rule::MatrixNotUnitary, g.label.clone());
                    }
                }
                for q in &g.qubits {
                    match state[q.0] {
                        WireState::Unprepared => push(i, Rule::Unprepared, q.to_string()),
                        WireState::Measured => push(i, Rule::AfterMeasure, q.to_string()),
                        WireState::Live => {}
                    }
                }
            }
        }
    }
    for (c, w) in writes.iter().enumerate() {
        if *w == 0 {
            out.push(Violation {
                op_index: None,
                rule: Rule::ClbitUnwritten,
                detail: ClbitId(c).to_string(),
            });
        }
    }
    out
}

pub fn ensure_valid(circuit: &Circuit) -> Result<()> {
    let violations = validate(circuit);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidCircuit(violations))
    }
}

/// The dual circuit: time reversed, preparations and measurements
/// exchanged, gates replaced by their adjoints.
///
/// New measurements receive fresh clbits numbered in dual-time order.
/// A qubit traced out at the end of the circuit is prepared at the start
/// of the dual. A `Reset` on a live wire counts as a discarded measurement
/// followed by a preparation.
pub fn dual(circuit: &Circuit) -> Result<Circuit> {
    ensure_valid(circuit)?;
    let mut next = 0usize;
    let (ops, _) = dual_ops(circuit, |_| {
        next += 1;
        Some(ClbitId(next - 1))
    });
    let num_clbits = ops
        .iter()
        .filter(|op| matches!(op, Operation::Measure { clbit: Some(_), .. }))
        .count();
    Ok(Circuit::from_ops(circuit.num_qubits, num_clbits, ops))
}

/// Dual construction with caller-chosen clbits for the measurements that
/// replace preparations. `assign` receives the index (in `circuit`) of the
/// preparing operation. Also returns, for each input op, the index of the
/// output op it became. The input must already be valid.
pub(crate) fn dual_ops(
    circuit: &Circuit,
    mut assign: impl FnMut(usize) -> Option<ClbitId>,
) -> (Vec<Operation>, Vec<usize>) {
    let n = circuit.num_qubits;
    let ops = &circuit.ops;

    // Wire state seen by each op, and the preparation kind that follows
    // each measurement on its wire.
    let mut before = Vec::with_capacity(ops.len());
    let mut state = vec![WireState::Unprepared; n];
    let mut pending_measure: Vec<Option<usize>> = vec![None; n];
    let mut next_prep_kind: Vec<Option<bool>> = vec![None; ops.len()]; // Some(true) = Reset
    for (i, op) in ops.iter().enumerate() {
        let q = op.qubits().first().map(|q| q.0);
        before.push(q.map(|q| state[q]));
        match op {
            Operation::Prepare(q) | Operation::Reset(q) => {
                if let Some(m) = pending_measure[q.0].take() {
                    next_prep_kind[m] = Some(matches!(op, Operation::Reset(_)));
                }
                state[q.0] = WireState::Live;
            }
            Operation::Measure { qubit, .. } => {
                state[qubit.0] = WireState::Measured;
                pending_measure[qubit.0] = Some(i);
            }
            Operation::Gate(_) => {}
        }
    }

    let prep_like = |q: QubitId, as_reset: bool| {
        if as_reset {
            Operation::Reset(q)
        } else {
            Operation::Prepare(q)
        }
    };

    let mut out = Vec::with_capacity(ops.len() + n);
    let mut position = vec![0; ops.len()];
    // Wires still live at the end were traced out; their dual starts there.
    for (q, s) in state.iter().enumerate() {
        if *s == WireState::Live {
            out.push(Operation::Prepare(QubitId(q)));
        }
    }
    for i in (0..ops.len()).rev() {
        position[i] = out.len();
        match &ops[i] {
            Operation::Gate(g) => out.push(Operation::Gate(g.adjoint())),
            Operation::Measure { qubit, .. } => {
                out.push(prep_like(*qubit, next_prep_kind[i].unwrap_or(false)));
            }
            Operation::Prepare(q) => out.push(Operation::Measure {
                qubit: *q,
                clbit: assign(i),
            }),
            Operation::Reset(q) => {
                out.push(Operation::Measure {
                    qubit: *q,
                    clbit: assign(i),
                });
                if before[i] == Some(WireState::Live) {
                    out.push(Operation::Reset(*q));
                }
            }
        }
    }
    (out, position)
}

/// Rewrites discarded measurements into resets: a discard followed later by
/// a preparation on the same wire becomes a single `Reset` at the
/// preparation's position, and a trailing discard is dropped (the qubit is
/// simply traced out). A `Prepare` on a measured wire becomes a `Reset`.
/// Also returns the new index of each surviving op.
pub(crate) fn fold_discards(circuit: &Circuit) -> (Circuit, Vec<Option<usize>>) {
    let n = circuit.num_qubits;
    let mut drop = vec![false; circuit.ops.len()];
    let mut as_reset = vec![false; circuit.ops.len()];
    let mut open_discard: Vec<Option<usize>> = vec![None; n];
    let mut measured = vec![false; n];
    for (i, op) in circuit.ops.iter().enumerate() {
        match op {
            Operation::Measure { qubit, clbit: None } => {
                open_discard[qubit.0] = Some(i);
                measured[qubit.0] = true;
            }
            Operation::Measure { qubit, .. } => measured[qubit.0] = true,
            Operation::Prepare(q) | Operation::Reset(q) => {
                if let Some(d) = open_discard[q.0].take() {
                    drop[d] = true;
                }
                if measured[q.0] {
                    as_reset[i] = true;
                }
                measured[q.0] = false;
            }
            Operation::Gate(_) => {}
        }
    }
    for d in open_discard.into_iter().flatten() {
        drop[d] = true;
    }
    let mut ops = Vec::with_capacity(circuit.ops.len());
    let mut position = vec![None; circuit.ops.len()];
    for (i, op) in circuit.ops.iter().enumerate() {
        if drop[i] {
            continue;
        }
        position[i] = Some(ops.len());
        ops.push(match op {
            Operation::Prepare(q) if as_reset[i] => Operation::Reset(*q),
            other => other.clone(),
        });
    }
    let folded = Circuit {
        num_qubits: circuit.num_qubits,
        num_clbits: circuit.num_clbits,
        ops,
        metadata: circuit.metadata.clone(),
    };
    (folded, position)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn chain3() -> Circuit {
        let mut c = Circuit::new(3, 3);
        c.prepare(0).prepare(1).prepare(2);
        c.named("cx", &[], &[0, 1]);
        c.named("cz", &[], &[1, 2]);
        c.measure(0, 0).measure(1, 1).measure(2, 2);
        c
    }

    fn bell() -> Circuit {
        let mut c = Circuit::new(2, 2);
        c.prepare(0).prepare(1).named("h", &[], &[0]).named("cx", &[], &[0, 1]);
        c.measure(0, 0).measure(1, 1);
        c
    }

    #[test]
    fn bell_is_valid() {
        assert!(validate(&bell()).is_empty());
    }

    #[test]
    fn gate_on_unprepared_qubit() {
        let mut c = Circuit::new(2, 2);
        c.prepare(0).named("cx", &[], &[0, 1]).prepare(1).measure(0, 0).measure(1, 1);
        let v = validate(&c);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].op_index, Some(1));
        assert_eq!(v[0].rule, Rule::Unprepared);
    }

    #[test]
    fn clbit_written_twice() {
        let mut c = Circuit::new(2, 2);
        c.prepare(0).prepare(1).measure(0, 0).measure(1, 0);
        let v = validate(&c);
        // The second write and the never-written c1.
        assert!(v.iter().any(|v| v.rule == Rule::ClbitRewritten && v.op_index == Some(3)));
        let mut c = Circuit::new(2, 1);
        c.prepare(0).prepare(1).measure(0, 0).measure(1, 0);
        let v = validate(&c);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].rule, Rule::ClbitRewritten);
    }

    #[test]
    fn structural_violations() {
        let mut c = Circuit::new(2, 1);
        c.prepare(0).prepare(1);
        c.named("cx", &[], &[1, 1]);
        c.measure(0, 0);
        c.named("h", &[], &[0]);
        c.prepare(1);
        let rules: Vec<Rule> = validate(&c).into_iter().map(|v| v.rule).collect();
        assert_eq!(rules, vec![Rule::DuplicateQubit, Rule::AfterMeasure, Rule::DoublePrepare]);

        let mut c = Circuit::new(1, 0);
        c.prepare(0);
        c.gate(Gate::with_matrix("bad", &[0], Matrix::identity(4)));
        c.gate(Gate {
            label: "nu".into(),
            params: vec![],
            qubits: vec![QubitId(0)],
            matrix: Matrix::from_row_major(vec![num_complex::Complex64::new(2.0, 0.0); 4]),
        });
        let rules: Vec<Rule> = validate(&c).into_iter().map(|v| v.rule).collect();
        assert_eq!(rules, vec![Rule::MatrixDimension, Rule::MatrixNotUnitary]);
    }

    #[test]
    fn reset_reopens_a_measured_wire() {
        let mut c = Circuit::new(1, 2);
        c.prepare(0).measure(0, 0).reset(0).named("x", &[], &[0]).measure(0, 1);
        assert!(validate(&c).is_empty());
        assert!(!c.is_measurement_terminated());
    }

    #[test]
    fn dual_of_chain() {
        let d = dual(&chain3()).unwrap();
        let kinds: Vec<String> = d
            .ops()
            .iter()
            .map(|op| match op {
                Operation::Gate(g) => format!("{}{:?}", g.label, g.qubits.iter().map(|q| q.0).collect::<Vec<_>>()),
                other => other.kind().to_string(),
            })
            .collect();
        assert_eq!(
            kinds,
            ["prep", "prep", "prep", "cz†[1, 2]", "cx†[0, 1]", "measure", "measure", "measure"]
        );
        assert!(validate(&d).is_empty());
    }

    #[test]
    fn dual_is_involution_on_chain() {
        let c = chain3();
        let dd = dual(&dual(&c).unwrap()).unwrap();
        assert_eq!(dd.ops().len(), c.ops().len());
        for (a, b) in c.ops().iter().zip(dd.ops()) {
            assert_eq!(a.kind(), b.kind());
            assert_eq!(a.qubits(), b.qubits());
            if let (Operation::Gate(x), Operation::Gate(y)) = (a, b) {
                assert_eq!(x.label, y.label);
                assert!(x.matrix.as_ref().unwrap().max_abs_diff(y.matrix.as_ref().unwrap()) < 1e-12);
            }
        }
    }

    #[test]
    fn dual_of_reuse_pattern_is_valid() {
        let mut c = Circuit::new(2, 3);
        c.prepare(0).prepare(1).named("cx", &[], &[0, 1]).measure(0, 0);
        c.reset(0).named("cx", &[], &[1, 0]).measure(1, 1).measure(0, 2);
        let d = dual(&c).unwrap();
        assert!(validate(&d).is_empty(), "{:?}", validate(&d));
        assert_eq!(d.count_kind("reset"), 1);
        let dd = dual(&d).unwrap();
        let kinds = |c: &Circuit| c.ops().iter().map(Operation::kind).collect::<Vec<_>>();
        assert_eq!(kinds(&dd), kinds(&c));
    }

    #[test]
    fn traced_wire_is_prepared_in_dual() {
        let mut c = Circuit::new(2, 1);
        c.prepare(0).prepare(1).named("cx", &[], &[0, 1]).measure(0, 0);
        let d = dual(&c).unwrap();
        assert!(validate(&d).is_empty());
        assert_eq!(d.count_kind("prep"), 2);
        assert_eq!(d.measurements().len(), 2);
    }

    #[test]
    fn fold_discards_merges_into_reset() {
        let ops = vec![
            Operation::Prepare(QubitId(0)),
            Operation::Measure { qubit: QubitId(0), clbit: None },
            Operation::Prepare(QubitId(0)),
            Operation::Measure { qubit: QubitId(0), clbit: Some(ClbitId(0)) },
            Operation::Prepare(QubitId(0)),
            Operation::Measure { qubit: QubitId(0), clbit: None },
        ];
        let (folded, position) = fold_discards(&Circuit::from_ops(1, 1, ops));
        assert_eq!(position, vec![Some(0), None, Some(1), Some(2), Some(3), None]);
        let kinds: Vec<&str> = folded.ops().iter().map(Operation::kind).collect();
        assert_eq!(kinds, ["prep", "reset", "measure", "reset"]);
    }
}
