use std::collections::HashMap;
use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;

use super::greedy::greedy_brute_first;
use crate::causal::{width_of_order, ConeMap, MeasurementOrder};
use crate::circuit::QubitId;
use crate::error::{Error, Result};

/// Largest output count accepted by [`brute_force_order`].
pub const BRUTE_FORCE_MAX_OUTPUTS: usize = 9;

/// Visited measured-sets are memoized up to this many entries.
const TABLE_CAPACITY: usize = 1 << 21;
/// The clock is consulted once per this many nodes.
const CLOCK_INTERVAL: u64 = 1024;

#[derive(Debug, Clone, PartialEq)]
pub struct ExactResult {
    pub order: MeasurementOrder,
    /// True when the search completed, so no narrower order exists.
    pub optimal: bool,
    pub nodes_explored: u64,
    pub elapsed: Duration,
}

impl ExactResult {
    pub fn width(&self) -> usize {
        self.order.width
    }
}

struct Search<'a> {
    cones: &'a ConeMap,
    /// Outputs with identical cones share a class id (the smallest member).
    class: Vec<usize>,
    deadline: Option<Instant>,
    timed_out: bool,
    nodes: u64,
    incumbent: usize,
    best: Vec<usize>,
    lower_bound: usize,
    /// Best peak at which each measured-set has been reached.
    seen: HashMap<FixedBitSet, usize>,
}

struct Node {
    measured: FixedBitSet,
    union: FixedBitSet,
    union_size: usize,
    order: Vec<usize>,
    peak: usize,
}

impl Search<'_> {
    fn out_of_time(&mut self) -> bool {
        if self.timed_out {
            return true;
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(CLOCK_INTERVAL) {
            if let Some(d) = self.deadline {
                self.timed_out = Instant::now() >= d;
            }
        }
        self.timed_out
    }

    fn new_inputs(&self, node: &Node, o: usize) -> usize {
        self.cones.cones()[o].inputs.difference(&node.union).count()
    }

    fn push(&self, node: &mut Node, o: usize) -> (usize, Vec<usize>) {
        let t = node.order.len();
        let mut added = Vec::new();
        for p in self.cones.cones()[o].inputs.ones() {
            if !node.union.put(p) {
                added.push(p);
            }
        }
        node.union_size += added.len();
        node.measured.insert(o);
        node.order.push(o);
        let prev = node.peak;
        node.peak = node.peak.max(node.union_size - t);
        (prev, added)
    }

    fn pop(&self, node: &mut Node, o: usize, prev: usize, added: &[usize]) {
        for &p in added {
            node.union.set(p, false);
        }
        node.union_size -= added.len();
        node.measured.set(o, false);
        node.order.pop();
        node.peak = prev;
    }

    fn expand(&mut self, node: &mut Node) {
        if self.out_of_time() || self.incumbent <= self.lower_bound {
            return;
        }
        let m = self.cones.num_outputs();

        // Outputs whose cone is already covered cost nothing and never hurt
        // later steps, so they are measured at once.
        let mut forced = Vec::new();
        loop {
            let free = (0..m).find(|&o| !node.measured.contains(o) && self.new_inputs(node, o) == 0);
            let Some(o) = free else { break };
            let undo = self.push(node, o);
            forced.push((o, undo));
        }

        if node.order.len() == m {
            if node.peak < self.incumbent {
                self.incumbent = node.peak;
                self.best = node.order.clone();
            }
        } else if node.peak < self.incumbent && self.first_visit(node) {
            let t = node.order.len();
            let mut children: Vec<(usize, usize)> = Vec::new();
            let mut classes_seen = FixedBitSet::with_capacity(m);
            for o in 0..m {
                if node.measured.contains(o) || classes_seen.put(self.class[o]) {
                    continue;
                }
                let new = self.new_inputs(node, o);
                if node.union_size + new - t < self.incumbent {
                    children.push((new, o));
                }
            }
            children.sort_unstable();
            for (_, o) in children {
                // The incumbent may have improved since the child was listed.
                let live = node.union_size + self.new_inputs(node, o) - t;
                if live.max(node.peak) >= self.incumbent {
                    continue;
                }
                let (prev, added) = self.push(node, o);
                self.expand(node);
                self.pop(node, o, prev, &added);
                if self.timed_out || self.incumbent <= self.lower_bound {
                    break;
                }
            }
        }

        for (o, (prev, added)) in forced.into_iter().rev() {
            self.pop(node, o, prev, &added);
        }
    }

    /// Records the node's measured-set; returns false when the same set was
    /// already reached with a peak no larger than this one.
    fn first_visit(&mut self, node: &Node) -> bool {
        match self.seen.get_mut(&node.measured) {
            Some(p) if *p <= node.peak => false,
            Some(p) => {
                *p = node.peak;
                true
            }
            None => {
                if self.seen.len() < TABLE_CAPACITY {
                    self.seen.insert(node.measured.clone(), node.peak);
                }
                true
            }
        }
    }
}

/// Minimum-width measurement order by depth-first branch and bound.
///
/// The incumbent starts from `hint` when given, otherwise from
/// [`greedy_brute_first`]. On timeout the incumbent is returned with
/// `optimal == false`. Single-threaded and deterministic.
pub fn exact_order(cones: &ConeMap, time_limit: Duration, hint: Option<&[QubitId]>) -> Result<ExactResult> {
    if time_limit.is_zero() {
        return Err(Error::InvalidArgument("time limit must be positive".into()));
    }
    let start = Instant::now();
    let m = cones.num_outputs();
    let (incumbent, best) = match hint {
        Some(h) => (width_of_order(cones, h)?, cones.positions_of(h)?),
        None => {
            let g = greedy_brute_first(cones);
            (g.width, cones.positions_of(&g.order)?)
        }
    };

    let mut class = Vec::with_capacity(m);
    for o in 0..m {
        let rep = (0..o)
            .find(|&p| cones.cones()[p].inputs == cones.cones()[o].inputs)
            .unwrap_or(o);
        class.push(rep);
    }
    let mut all = FixedBitSet::with_capacity(cones.num_qubits());
    for c in cones.cones() {
        all.union_with(&c.inputs);
    }
    // The first step needs a whole cone; the last needs every input minus
    // the outputs already measured.
    let lower_bound = cones
        .cones()
        .iter()
        .map(|c| c.size())
        .min()
        .unwrap_or(0)
        .max((all.count_ones(..) + 1).saturating_sub(m));

    let mut search = Search {
        cones,
        class,
        deadline: start.checked_add(time_limit),
        timed_out: false,
        nodes: 0,
        incumbent,
        best,
        lower_bound,
        seen: HashMap::new(),
    };
    let mut root = Node {
        measured: FixedBitSet::with_capacity(m),
        union: FixedBitSet::with_capacity(cones.num_qubits()),
        union_size: 0,
        order: Vec::with_capacity(m),
        peak: 0,
    };
    if m > 0 {
        search.expand(&mut root);
    }

    let order: Vec<QubitId> = search.best.iter().map(|&p| cones.cones()[p].qubit).collect();
    Ok(ExactResult {
        order: MeasurementOrder {
            order,
            width: search.incumbent,
        },
        optimal: !search.timed_out,
        nodes_explored: search.nodes,
        elapsed: start.elapsed(),
    })
}

/// Exhaustive search over all orders; returns the lexicographically
/// smallest (by qubit index) order of minimum width.
pub fn brute_force_order(cones: &ConeMap) -> Result<ExactResult> {
    let start = Instant::now();
    let m = cones.num_outputs();
    if m > BRUTE_FORCE_MAX_OUTPUTS {
        return Err(Error::InvalidArgument(format!(
            "brute force supports at most {BRUTE_FORCE_MAX_OUTPUTS} outputs, got {m}"
        )));
    }
    let mut perm: Vec<QubitId> = cones.outputs().collect();
    let mut best = (width_of_order(cones, &perm)?, perm.clone());
    let mut count = 1u64;
    while next_permutation(&mut perm) {
        count += 1;
        let w = width_of_order(cones, &perm)?;
        if w < best.0 {
            best = (w, perm.clone());
        }
    }
    Ok(ExactResult {
        order: MeasurementOrder {
            order: best.1,
            width: best.0,
        },
        optimal: true,
        nodes_explored: count,
        elapsed: start.elapsed(),
    })
}

fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    let Some(i) = v.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = v.iter().rposition(|x| *x > v[i]).expect("pivot has a successor");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::causal::compute_cones;
    use crate::circuit::Circuit;
    use crate::generators::random_circuit;

    fn chain3() -> Circuit {
        let mut c = Circuit::new(3, 3);
        c.prepare(0).prepare(1).prepare(2);
        c.named("cx", &[], &[0, 1]).named("cz", &[], &[1, 2]);
        c.measure(0, 0).measure(1, 1).measure(2, 2);
        c
    }

    fn qs(v: &[usize]) -> Vec<QubitId> {
        v.iter().copied().map(QubitId).collect()
    }

    #[test]
    fn permutations_in_lexicographic_order() {
        let mut v = vec![1, 2, 3];
        let mut all = vec![v.clone()];
        while next_permutation(&mut v) {
            all.push(v.clone());
        }
        assert_eq!(all.len(), 6);
        assert_eq!(all[1], vec![1, 3, 2]);
        assert_eq!(all[5], vec![3, 2, 1]);
    }

    #[test]
    fn chain_exact_and_brute() {
        let cones = compute_cones(&chain3()).unwrap();
        let e = exact_order(&cones, Duration::from_secs(5), None).unwrap();
        assert_eq!(e.width(), 2);
        assert!(e.optimal);
        assert_eq!(e.order.order, qs(&[0, 1, 2]));
        let b = brute_force_order(&cones).unwrap();
        assert_eq!(b.width(), 2);
        assert_eq!(b.order.order, qs(&[0, 1, 2]));
        assert_eq!(b.nodes_explored, 6);
    }

    #[test]
    fn zero_time_limit_rejected() {
        let cones = compute_cones(&chain3()).unwrap();
        assert!(exact_order(&cones, Duration::ZERO, None).is_err());
    }

    #[test]
    fn bad_hint_rejected() {
        let cones = compute_cones(&chain3()).unwrap();
        assert!(exact_order(&cones, Duration::from_secs(1), Some(&qs(&[0, 1]))).is_err());
    }

    #[test]
    fn hint_seeds_incumbent() {
        let cones = compute_cones(&chain3()).unwrap();
        let r = exact_order(&cones, Duration::from_secs(1), Some(&qs(&[1, 0, 2]))).unwrap();
        assert_eq!(r.width(), 2);
        assert!(r.optimal);
    }

    #[test]
    fn brute_force_size_limit() {
        let sets = (0..10).map(|q| (QubitId(q), vec![q])).collect();
        let cones = ConeMap::from_input_sets(10, sets).unwrap();
        assert!(brute_force_order(&cones).is_err());
        assert_eq!(exact_order(&cones, Duration::from_secs(1), None).unwrap().width(), 1);
    }

    #[test]
    fn matches_brute_force_on_random_circuits() {
        for seed in 0..20 {
            let c = random_circuit(6, 8, seed);
            let cones = compute_cones(&c).unwrap();
            let e = exact_order(&cones, Duration::from_secs(10), None).unwrap();
            let b = brute_force_order(&cones).unwrap();
            assert_eq!(e.width(), b.width(), "seed {seed}");
            assert_eq!(width_of_order(&cones, &e.order.order).unwrap(), e.width());
        }
    }

    #[test]
    fn exact_beats_hint_on_denser_instances() {
        for seed in 0..10 {
            let c = random_circuit(8, 14, 100 + seed);
            let cones = compute_cones(&c).unwrap();
            let worst: Vec<QubitId> = cones.outputs().collect();
            let hinted = exact_order(&cones, Duration::from_secs(10), Some(&worst)).unwrap();
            let b = brute_force_order(&cones).unwrap();
            assert_eq!(hinted.width(), b.width());
        }
    }
}
