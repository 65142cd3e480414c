use std::sync::atomic::{AtomicUsize, Ordering};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::causal::{ConeMap, MeasurementOrder};
use crate::circuit::QubitId;
use crate::error::{Error, Result};

/// Inverted index from each input qubit to the outputs whose cone holds it.
struct Incidence {
    by_input: Vec<Vec<usize>>,
}

impl Incidence {
    fn new(cones: &ConeMap) -> Self {
        let mut by_input = vec![Vec::new(); cones.num_qubits()];
        for (o, cone) in cones.cones().iter().enumerate() {
            for p in cone.inputs.ones() {
                by_input[p].push(o);
            }
        }
        Self { by_input }
    }
}

/// One greedy run starting from cone position `first`. Gives up (returning
/// `None`) as soon as the live count exceeds `abort_above`.
fn run(cones: &ConeMap, inc: &Incidence, first: usize, abort_above: usize) -> Option<(Vec<usize>, usize)> {
    let m = cones.num_outputs();
    let mut fresh: Vec<usize> = cones.cones().iter().map(|c| c.size()).collect();
    let mut measured = vec![false; m];
    let mut union = FixedBitSet::with_capacity(cones.num_qubits());
    let mut union_size = 0usize;
    let mut order = Vec::with_capacity(m);
    let mut width = 0usize;

    let mut next = first;
    for t in 0..m {
        measured[next] = true;
        for p in cones.cones()[next].inputs.ones() {
            if !union.put(p) {
                union_size += 1;
                for &o in &inc.by_input[p] {
                    fresh[o] -= 1;
                }
            }
        }
        width = width.max(union_size - t);
        if width > abort_above {
            return None;
        }
        order.push(next);
        if t + 1 == m {
            break;
        }
        // Fewest new inputs, ties to the lowest index (positions follow
        // qubit order).
        next = (0..m)
            .filter(|&o| !measured[o])
            .min_by_key(|&o| fresh[o])
            .expect("unmeasured output remains");
    }
    Some((order, width))
}

fn to_order(cones: &ConeMap, positions: &[usize], width: usize) -> MeasurementOrder {
    MeasurementOrder {
        order: positions.iter().map(|&p| cones.cones()[p].qubit).collect(),
        width,
    }
}

/// Greedy order: start from `first` (or the smallest cone), then always
/// measure the output whose cone adds the fewest new inputs to the union
/// of cones measured so far. Ties go to the smallest qubit index.
pub fn greedy_order(cones: &ConeMap, first: Option<QubitId>) -> Result<MeasurementOrder> {
    if cones.num_outputs() == 0 {
        return Ok(MeasurementOrder { order: Vec::new(), width: 0 });
    }
    let start = match first {
        Some(q) => cones
            .position(q)
            .ok_or_else(|| Error::InvalidOrder(format!("{q} is not a measured output")))?,
        None => (0..cones.num_outputs())
            .min_by_key(|&o| cones.cones()[o].size())
            .expect("non-empty"),
    };
    let inc = Incidence::new(cones);
    let (positions, width) = run(cones, &inc, start, usize::MAX).expect("no abort bound");
    Ok(to_order(cones, &positions, width))
}

/// Greedy order tried from every possible first output, keeping the
/// narrowest; ties go to the smallest first qubit. Starts run in parallel
/// and abandon a run once it is strictly worse than the best found.
pub fn greedy_brute_first(cones: &ConeMap) -> MeasurementOrder {
    let m = cones.num_outputs();
    if m == 0 {
        return MeasurementOrder { order: Vec::new(), width: 0 };
    }
    let inc = Incidence::new(cones);
    let best = AtomicUsize::new(usize::MAX);
    let (_, first, positions, width) = (0..m)
        .into_par_iter()
        .filter_map(|first| {
            let (positions, width) = run(cones, &inc, first, best.load(Ordering::Relaxed))?;
            best.fetch_min(width, Ordering::Relaxed);
            Some((width, first, positions, width))
        })
        .min_by_key(|(w, first, _, _)| (*w, *first))
        .expect("at least one run completes");
    debug_assert!(first < m);
    to_order(cones, &positions, width)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::causal::{compute_cones, width_of_order};
    use crate::circuit::Circuit;
    use crate::generators::random_circuit;

    fn qs(v: &[usize]) -> Vec<QubitId> {
        v.iter().copied().map(QubitId).collect()
    }

    fn chain3() -> Circuit {
        let mut c = Circuit::new(3, 3);
        c.prepare(0).prepare(1).prepare(2);
        c.named("cx", &[], &[0, 1]).named("cz", &[], &[1, 2]);
        c.measure(0, 0).measure(1, 1).measure(2, 2);
        c
    }

    #[test]
    fn chain_greedy() {
        let cones = compute_cones(&chain3()).unwrap();
        let r = greedy_order(&cones, None).unwrap();
        assert_eq!(r.order, qs(&[0, 1, 2]));
        assert_eq!(r.width, 2);
        let r = greedy_order(&cones, Some(QubitId(2))).unwrap();
        assert_eq!(r.width, 3);
        assert_eq!(greedy_brute_first(&cones).width, 2);
    }

    #[test]
    fn first_must_be_an_output() {
        let cones = compute_cones(&chain3()).unwrap();
        assert!(greedy_order(&cones, Some(QubitId(9))).is_err());
    }

    #[test]
    fn reported_width_matches_evaluation() {
        for seed in 0..30 {
            let c = random_circuit(8, 12, seed);
            let cones = compute_cones(&c).unwrap();
            let g = greedy_order(&cones, None).unwrap();
            assert_eq!(g.width, width_of_order(&cones, &g.order).unwrap());
            let b = greedy_brute_first(&cones);
            assert_eq!(b.width, width_of_order(&cones, &b.order).unwrap());
            assert!(b.width <= g.width);
        }
    }

    #[test]
    fn brute_first_matches_sequential_scan() {
        for seed in 0..20 {
            let cones = compute_cones(&random_circuit(7, 10, seed)).unwrap();
            let mut best: Option<MeasurementOrder> = None;
            for q in cones.outputs() {
                let r = greedy_order(&cones, Some(q)).unwrap();
                if best.as_ref().is_none_or(|b| r.width < b.width) {
                    best = Some(r);
                }
            }
            assert_eq!(greedy_brute_first(&cones), best.unwrap());
        }
    }
}
