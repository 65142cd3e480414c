//! Binary schedule model of a measurement order.
//!
//! An order of the `T` outputs is encoded as two 0/1 tables over inputs `q`
//! and steps `t`: `m[q][t]` says output `q` is measured at step `t`, and
//! `c[q][t]` says input `q` is live at step `t`, i.e. it belongs to the cone
//! of some output measured at or before `t` and has not itself been measured
//! before `t`. [`Assignment::check`] tests every model constraint on such
//! tables, independently of the search that produced them.

use std::fmt;

use crate::causal::ConeMap;
use crate::circuit::QubitId;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constraint {
    /// The cost bounds the number of live qubits at every step.
    PeakBound,
    /// Every input in a measured output's cone has been live at some step
    /// up to the measurement.
    ConeInputsLive,
    /// A live qubit stays live at the next step unless it was measured.
    LivenessCarry,
    /// A qubit is live at the step it is measured.
    MeasuredIsLive,
    /// A measured qubit is never live again.
    DeadAfterMeasure,
    /// Every output is measured exactly once.
    MeasuredOnce,
    /// Exactly one output is measured per step.
    OnePerStep,
}

impl Constraint {
    pub const ALL: [Constraint; 7] = [
        Constraint::PeakBound,
        Constraint::ConeInputsLive,
        Constraint::LivenessCarry,
        Constraint::MeasuredIsLive,
        Constraint::DeadAfterMeasure,
        Constraint::MeasuredOnce,
        Constraint::OnePerStep,
    ];
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintViolation {
    pub constraint: Constraint,
    pub qubit: Option<QubitId>,
    pub step: Option<usize>,
}

impl fmt::Display for ConstraintViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.constraint)?;
        if let Some(q) = self.qubit {
            write!(f, " at {q}")?;
        }
        if let Some(t) = self.step {
            write!(f, " step {t}")?;
        }
        Ok(())
    }
}

/// A candidate solution of the schedule model. Rows are indexed by qubit,
/// columns by step (0-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub measured: Vec<Vec<bool>>,
    pub live: Vec<Vec<bool>>,
    pub cost: usize,
}

impl Assignment {
    /// Tables induced by a measurement order, with the cost set to the
    /// order's width.
    pub fn from_order(cones: &ConeMap, order: &[QubitId]) -> Result<Self> {
        let positions = cones.positions_of(order)?;
        let n = cones.num_qubits();
        let steps = positions.len();
        let mut measured = vec![vec![false; steps]; n];
        let mut live = vec![vec![false; steps]; n];
        let mut in_union = vec![false; n];
        let mut gone = vec![false; n];
        let mut cost = 0;
        for (t, &p) in positions.iter().enumerate() {
            let cone = &cones.cones()[p];
            for q in cone.inputs.ones() {
                in_union[q] = true;
            }
            for q in 0..n {
                live[q][t] = in_union[q] && !gone[q];
            }
            cost = cost.max(live.iter().filter(|row| row[t]).count());
            measured[cone.qubit.0][t] = true;
            gone[cone.qubit.0] = true;
        }
        Ok(Self { measured, live, cost })
    }

    /// Every violated constraint instance. Empty iff the assignment is
    /// feasible for `cones`.
    pub fn check(&self, cones: &ConeMap) -> Vec<ConstraintViolation> {
        let n = cones.num_qubits();
        let steps = cones.num_outputs();
        let mut out = Vec::new();
        let mut flag = |constraint, qubit: Option<usize>, step| {
            out.push(ConstraintViolation {
                constraint,
                qubit: qubit.map(QubitId),
                step,
            })
        };
        let shape_ok = self.measured.len() == n
            && self.live.len() == n
            && self.measured.iter().chain(&self.live).all(|row| row.len() == steps);
        if !shape_ok {
            flag(Constraint::OnePerStep, None, None);
            return out;
        }
        let m = |q: usize, t: usize| self.measured[q][t];
        let c = |q: usize, t: usize| self.live[q][t];

        for t in 0..steps {
            if (0..n).filter(|&q| c(q, t)).count() > self.cost {
                flag(Constraint::PeakBound, None, Some(t));
            }
        }
        for cone in cones.cones() {
            let q = cone.qubit.0;
            for t in (0..steps).filter(|&t| m(q, t)) {
                for j in cone.inputs.ones() {
                    if !(0..=t).any(|i| c(j, i)) {
                        flag(Constraint::ConeInputsLive, Some(j), Some(t));
                    }
                }
            }
        }
        for q in 0..n {
            for t in 1..steps {
                if c(q, t - 1) && (m(q, t - 1) as u8 + c(q, t) as u8) != 1 {
                    flag(Constraint::LivenessCarry, Some(q), Some(t));
                }
            }
            for t in 0..steps {
                if m(q, t) && !c(q, t) {
                    flag(Constraint::MeasuredIsLive, Some(q), Some(t));
                }
                if m(q, t) && (t + 1..steps).any(|i| c(q, i)) {
                    flag(Constraint::DeadAfterMeasure, Some(q), Some(t));
                }
            }
            let times = (0..steps).filter(|&t| m(q, t)).count();
            let is_output = cones.position(QubitId(q)).is_some();
            if times != usize::from(is_output) {
                flag(Constraint::MeasuredOnce, Some(q), None);
            }
        }
        for t in 0..steps {
            if (0..n).filter(|&q| m(q, t)).count() != 1 {
                flag(Constraint::OnePerStep, None, Some(t));
            }
        }
        out
    }
}
