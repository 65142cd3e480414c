use super::brickwork::{measure_all, place, prepare_all};
use crate::circuit::{dual, Circuit};
use crate::error::{Error, Result};
use crate::gates::GateSource;

/// Sequential matrix-product-state preparation: a bond register of
/// `log2(chi)` qubits interacts in turn with each of `n` physical qubits.
/// Physical qubits are `0..n` and are measured; the bond register follows
/// them and is traced out.
pub fn mps_prep(n: usize, chi: usize, source: GateSource) -> Result<Circuit> {
    if n == 0 || chi < 2 || !chi.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "MPS needs N >= 1 and a power-of-two bond dimension >= 2, got N={n}, chi={chi}"
        )));
    }
    let bond = chi.trailing_zeros() as usize;
    let mut c = Circuit::new(n + bond, n);
    prepare_all(&mut c);
    let mut site = 0;
    for i in 0..n {
        let mut qubits = vec![i];
        qubits.extend(n..n + bond);
        place(&mut c, &source, &mut site, &qubits);
    }
    for q in 0..n {
        c.measure(q, q);
    }
    Ok(c)
}

/// Binary tree tensor network of depth `depth` on `2^depth` qubits. The
/// root acts on qubits `0` and `2^(depth-1)`; every other node acts on the
/// qubit its subtree inherits (the lowest index) and a fresh one halfway
/// through the subtree. Gates are emitted level by level from the root.
pub fn ttn(depth: usize, source: GateSource) -> Result<Circuit> {
    if depth == 0 || depth > 20 {
        return Err(Error::InvalidArgument(format!("TTN depth must be in 1..=20, got {depth}")));
    }
    let n = 1usize << depth;
    let mut c = Circuit::new(n, n);
    prepare_all(&mut c);
    let mut site = 0;
    let mut span = n;
    while span >= 2 {
        for lo in (0..n).step_by(span) {
            place(&mut c, &source, &mut site, &[lo, lo + span / 2]);
        }
        span /= 2;
    }
    measure_all(&mut c);
    Ok(c)
}

/// Open-boundary binary MERA of depth `depth` on `2^depth` qubits.
///
/// Scale `s` has `2^s` sites; site `j` of scale `s` lives on qubit
/// `j·2^(depth-s)`. Going from scale `s-1` to `s`, each site `i` spawns
/// sites `2i` (same qubit) and `2i+1` (a fresh qubit) through an isometry,
/// then disentanglers act on neighbouring sites `(2i+1, 2i+2)`.
pub fn mera(depth: usize, source: GateSource) -> Result<Circuit> {
    if !(2..=20).contains(&depth) {
        return Err(Error::InvalidArgument(format!("MERA depth must be in 2..=20, got {depth}")));
    }
    let n = 1usize << depth;
    let mut c = Circuit::new(n, n);
    prepare_all(&mut c);
    let mut site = 0;
    for s in 1..=depth {
        let stride = 1usize << (depth - s);
        let sites = 1usize << s;
        for i in 0..sites / 2 {
            place(&mut c, &source, &mut site, &[2 * i * stride, (2 * i + 1) * stride]);
        }
        for j in (1..sites - 1).step_by(2) {
            place(&mut c, &source, &mut site, &[j * stride, (j + 1) * stride]);
        }
    }
    measure_all(&mut c);
    Ok(c)
}

/// Quantum convolutional network with product-state inputs: the dual of
/// [`mera`].
pub fn qcnn(depth: usize, source: GateSource) -> Result<Circuit> {
    dual(&mera(depth, source)?)
}
