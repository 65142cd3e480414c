//! Rewriting a circuit into its reduced-width form for a given
//! measurement order.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::causal::{compute_cones, MeasurementOrder};
use crate::circuit::{dual, dual_ops, fold_discards, Circuit, ClbitId, Operation, QubitId};
use crate::error::{Error, Result};

/// How logical inputs are assigned to physical wires.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AllocationPolicy {
    /// Reuse a freed wire (oldest first) whenever one is available.
    ReuseFirst,
    /// Take fresh wires until `budget` are in use, then reuse.
    NewFirstUntil(usize),
}

impl fmt::Display for AllocationPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AllocationPolicy::ReuseFirst => f.write_str("reuse-first"),
            AllocationPolicy::NewFirstUntil(b) => write!(f, "new-first-until:{b}"),
        }
    }
}

impl FromStr for AllocationPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "reuse-first" {
            return Ok(AllocationPolicy::ReuseFirst);
        }
        s.strip_prefix("new-first-until:")
            .and_then(|b| b.parse().ok())
            .map(AllocationPolicy::NewFirstUntil)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown policy {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RewriteOptions {
    /// Fail instead of exceeding a `NewFirstUntil` budget.
    pub strict_budget: bool,
    /// Append a `Reset` to every wire whose last operation is a measurement.
    pub final_resets: bool,
}

/// One logical qubit's lifetime on a physical wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Binding {
    pub logical: QubitId,
    pub physical: QubitId,
    /// Index of the `Prepare` or `Reset` that opens the lifetime.
    pub start_op: usize,
    /// Index of the closing `Measure`; `None` if the qubit is traced out.
    pub end_op: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompiledCircuit {
    pub circuit: Circuit,
    pub physical_width: usize,
    /// Original output qubit → clbit holding its outcome in `circuit`.
    pub clbit_map: BTreeMap<QubitId, ClbitId>,
    pub bindings: Vec<Binding>,
    pub order: MeasurementOrder,
    pub policy: AllocationPolicy,
    pub via_dual: bool,
}

pub const ORDER_KEY: &str = "order";
pub const POLICY_KEY: &str = "policy";
pub const PHYSICAL_WIDTH_KEY: &str = "physical_width";
pub const CLBIT_MAP_KEY: &str = "clbit_map";
pub const VIA_DUAL_KEY: &str = "via_dual";

/// `"q:c,q:c,…"` form of a clbit map, as stored in circuit metadata.
pub fn format_clbit_map(map: &BTreeMap<QubitId, ClbitId>) -> String {
    map.iter()
        .map(|(q, c)| format!("{}:{}", q.0, c.0))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn parse_clbit_map(text: &str) -> Result<BTreeMap<QubitId, ClbitId>> {
    let bad = || Error::InvalidArgument(format!("malformed clbit map {text:?}"));
    if text.is_empty() {
        return Ok(BTreeMap::new());
    }
    text.split(',')
        .map(|pair| {
            let (q, c) = pair.split_once(':').ok_or_else(bad)?;
            Ok((
                QubitId(q.trim().parse().map_err(|_| bad())?),
                ClbitId(c.trim().parse().map_err(|_| bad())?),
            ))
        })
        .collect()
}

impl CompiledCircuit {
    fn annotate(&mut self) {
        let order = self.order.order.iter().map(|q| q.0.to_string()).collect::<Vec<_>>().join(",");
        let md = &mut self.circuit.metadata;
        md.insert(ORDER_KEY.into(), order);
        md.insert(POLICY_KEY.into(), self.policy.to_string());
        md.insert(PHYSICAL_WIDTH_KEY.into(), self.physical_width.to_string());
        md.insert(CLBIT_MAP_KEY.into(), format_clbit_map(&self.clbit_map));
        md.insert(VIA_DUAL_KEY.into(), self.via_dual.to_string());
    }

    /// Number of `Reset` operations that start a new logical lifetime.
    pub fn reuse_count(&self) -> usize {
        self.bindings
            .iter()
            .filter(|b| matches!(self.circuit.ops()[b.start_op], Operation::Reset(_)))
            .count()
    }
}

struct Allocator {
    policy: AllocationPolicy,
    strict: bool,
    width: usize,
    fresh: usize,
    pool: VecDeque<usize>,
}

impl Allocator {
    /// Picks a wire; `true` when it is a reused one.
    fn take(&mut self) -> Result<(usize, bool)> {
        let reuse = match self.policy {
            AllocationPolicy::ReuseFirst => !self.pool.is_empty(),
            AllocationPolicy::NewFirstUntil(budget) => {
                if self.fresh < budget {
                    false
                } else if !self.pool.is_empty() {
                    true
                } else if self.strict {
                    return Err(Error::BudgetTooSmall {
                        budget,
                        width: self.width,
                    });
                } else {
                    false
                }
            }
        };
        if reuse {
            Ok((self.pool.pop_front().expect("pool checked"), true))
        } else {
            self.fresh += 1;
            Ok((self.fresh - 1, false))
        }
    }
}

struct Emitter {
    ops: Vec<Operation>,
    physical: Vec<Option<usize>>,
    binding_of: Vec<Option<usize>>,
    bindings: Vec<Binding>,
    alloc: Allocator,
}

impl Emitter {
    fn bind(&mut self, logical: QubitId) -> Result<usize> {
        if let Some(p) = self.physical[logical.0] {
            return Ok(p);
        }
        let (p, reused) = self.alloc.take()?;
        self.binding_of[logical.0] = Some(self.bindings.len());
        self.bindings.push(Binding {
            logical,
            physical: QubitId(p),
            start_op: self.ops.len(),
            end_op: None,
        });
        self.ops.push(if reused {
            Operation::Reset(QubitId(p))
        } else {
            Operation::Prepare(QubitId(p))
        });
        self.physical[logical.0] = Some(p);
        Ok(p)
    }

    fn gate(&mut self, op: &Operation) -> Result<()> {
        let Operation::Gate(g) = op else { unreachable!("only gates are replayed") };
        let mut g = g.clone();
        for q in g.qubits.iter_mut() {
            *q = QubitId(self.bind(*q)?);
        }
        self.ops.push(Operation::Gate(g));
        Ok(())
    }

    fn measure(&mut self, logical: QubitId, clbit: ClbitId) -> Result<()> {
        let p = self.bind(logical)?;
        let b = self.binding_of[logical.0].expect("bound above");
        self.bindings[b].end_op = Some(self.ops.len());
        self.ops.push(Operation::Measure {
            qubit: QubitId(p),
            clbit: Some(clbit),
        });
        self.alloc.pool.push_back(p);
        Ok(())
    }
}

/// Appends a `Reset` to every wire whose last operation is a measurement.
fn append_final_resets(circuit: &mut Circuit) {
    let mut last_measured = vec![false; circuit.num_qubits()];
    for op in circuit.ops() {
        for q in op.qubits() {
            last_measured[q.0] = matches!(op, Operation::Measure { .. });
        }
    }
    for (q, m) in last_measured.into_iter().enumerate() {
        if m {
            circuit.reset(q);
        }
    }
}

/// Rewrites `circuit` so that outputs are measured in `order`, reusing
/// measured wires for later inputs.
///
/// For each output in turn, the not-yet-emitted gates of its cone are
/// emitted in their original relative order, binding each logical input to
/// a physical wire at first use; the output is then measured and its wire
/// returned to the free pool. Gates outside every output cone (acting only
/// on traced-out qubits) are emitted last.
pub fn rewrite(circuit: &Circuit, order: &MeasurementOrder, policy: AllocationPolicy) -> Result<CompiledCircuit> {
    rewrite_with(circuit, order, policy, RewriteOptions::default())
}

pub fn rewrite_with(
    circuit: &Circuit,
    order: &MeasurementOrder,
    policy: AllocationPolicy,
    options: RewriteOptions,
) -> Result<CompiledCircuit> {
    let cones = compute_cones(circuit)?;
    let positions = cones.positions_of(&order.order)?;
    let width = crate::causal::width_of_order(&cones, &order.order)?;
    if width != order.width {
        return Err(Error::InvalidOrder(format!(
            "order claims width {} but has width {width}",
            order.width
        )));
    }
    if let AllocationPolicy::NewFirstUntil(budget) = policy {
        if options.strict_budget && budget < width {
            return Err(Error::BudgetTooSmall { budget, width });
        }
    }

    let n = circuit.num_qubits();
    let mut emitted = vec![false; circuit.ops().len()];
    let mut e = Emitter {
        ops: Vec::with_capacity(circuit.ops().len()),
        physical: vec![None; n],
        binding_of: vec![None; n],
        bindings: Vec::new(),
        alloc: Allocator {
            policy,
            strict: options.strict_budget,
            width,
            fresh: 0,
            pool: VecDeque::new(),
        },
    };
    let mut clbit_map = BTreeMap::new();
    for &p in &positions {
        let cone = &cones.cones()[p];
        for &g in &cone.gates {
            if !std::mem::replace(&mut emitted[g], true) {
                e.gate(&circuit.ops()[g])?;
            }
        }
        e.measure(cone.qubit, cone.clbit)?;
        clbit_map.insert(cone.qubit, cone.clbit);
    }
    for (i, op) in circuit.ops().iter().enumerate() {
        if matches!(op, Operation::Gate(_)) && !emitted[i] {
            e.gate(op)?;
        }
    }

    let physical_width = e.alloc.fresh;
    let mut out = Circuit::from_ops(physical_width, circuit.num_clbits(), e.ops);
    if options.final_resets {
        append_final_resets(&mut out);
    }
    let mut compiled = CompiledCircuit {
        circuit: out,
        physical_width,
        clbit_map,
        bindings: e.bindings,
        order: order.clone(),
        policy,
        via_dual: false,
    };
    compiled.annotate();
    Ok(compiled)
}

/// Compiles the dual of `circuit` with `dual_order` (an order of the dual's
/// outputs) and dualizes the result back, so it samples the same
/// distribution as `circuit` on the same clbits.
pub fn rewrite_via_dual(
    circuit: &Circuit,
    dual_order: &MeasurementOrder,
    policy: AllocationPolicy,
) -> Result<CompiledCircuit> {
    rewrite_via_dual_with(circuit, dual_order, policy, RewriteOptions::default())
}

pub fn rewrite_via_dual_with(
    circuit: &Circuit,
    dual_order: &MeasurementOrder,
    policy: AllocationPolicy,
    options: RewriteOptions,
) -> Result<CompiledCircuit> {
    let inner = rewrite_with(
        &dual(circuit)?,
        dual_order,
        policy,
        RewriteOptions {
            final_resets: false,
            ..options
        },
    )?;
    let outcome: BTreeMap<QubitId, ClbitId> = circuit.measurements().into_iter().collect();

    // A binding of logical `q` in the inner circuit becomes the measurement
    // of `q` once time is reversed.
    let mut opened_by = vec![None; inner.circuit.ops().len()];
    for b in &inner.bindings {
        opened_by[b.start_op] = Some(b.logical);
    }
    let (ops, position) = dual_ops(&inner.circuit, |i| opened_by[i].and_then(|q| outcome.get(&q).copied()));
    let raw = Circuit::from_ops(inner.physical_width, circuit.num_clbits(), ops);
    let (mut out, folded) = fold_discards(&raw);
    out.metadata.clear();

    let bindings = inner
        .bindings
        .iter()
        .filter_map(|b| {
            let start = folded[position[b.end_op?]]?;
            let end = folded[position[b.start_op]].filter(|_| outcome.contains_key(&b.logical));
            Some(Binding {
                logical: b.logical,
                physical: b.physical,
                start_op: start,
                end_op: end,
            })
        })
        .collect();
    if options.final_resets {
        append_final_resets(&mut out);
    }
    let mut compiled = CompiledCircuit {
        circuit: out,
        physical_width: inner.physical_width,
        clbit_map: outcome,
        bindings,
        order: dual_order.clone(),
        policy,
        via_dual: true,
    };
    compiled.annotate();
    Ok(compiled)
}
