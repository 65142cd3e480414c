use super::graph::{random_u3r_graph, Graph};
use crate::circuit::Circuit;
use crate::error::{Error, Result};

/// Mixer angle used for generated benchmark instances.
pub const DEFAULT_BETA: f64 = 0.3;
/// Cost angle used for generated benchmark instances.
pub const DEFAULT_GAMMA: f64 = 0.7;

/// MaxCut QAOA circuit: Hadamards on every vertex qubit, then for each
/// round `n` the cost unitary `exp(-iγ·½Σ w(1 - ZZ))` as one
/// `rzz(-gammas[n]·w)` per edge (in stored edge order, global phase
/// dropped), followed by the mixer `exp(-iβ·ΣX)` as `rx(2·betas[n])` on
/// every qubit; every qubit is measured.
pub fn qaoa_maxcut(graph: &Graph, betas: &[f64], gammas: &[f64]) -> Result<Circuit> {
    if betas.len() != gammas.len() || betas.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "need equally many betas and gammas (at least one), got {} and {}",
            betas.len(),
            gammas.len()
        )));
    }
    let n = graph.num_vertices();
    let mut c = Circuit::new(n, n);
    for q in 0..n {
        c.prepare(q);
    }
    for q in 0..n {
        c.named("h", &[], &[q]);
    }
    for (&beta, &gamma) in betas.iter().zip(gammas) {
        for (&(u, v), &w) in graph.edges().iter().zip(graph.weights()) {
            c.named("rzz", &[-gamma * w], &[u, v]);
        }
        for q in 0..n {
            c.named("rx", &[2.0 * beta], &[q]);
        }
    }
    for q in 0..n {
        c.measure(q, q);
    }
    Ok(c)
}

/// Depth-`p` QAOA on a random 3-regular graph with the default angles.
pub fn qaoa_u3r(n: usize, p: usize, seed: u64) -> Result<(Graph, Circuit)> {
    let graph = random_u3r_graph(n, seed)?;
    let circuit = qaoa_maxcut(&graph, &vec![DEFAULT_BETA; p], &vec![DEFAULT_GAMMA; p])?;
    Ok((graph, circuit))
}
