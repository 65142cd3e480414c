use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::gates::GateSource;

/// Adds a gate from `source` on `qubits`, using the next site index.
pub(super) fn place(c: &mut Circuit, source: &GateSource, site: &mut u64, qubits: &[usize]) {
    let (label, matrix) = source.gate_for_site(*site, qubits.len());
    *site += 1;
    c.gate(Gate::with_matrix(&label, qubits, matrix));
}

pub(super) fn prepare_all(c: &mut Circuit) {
    for q in 0..c.num_qubits() {
        c.prepare(q);
    }
}

pub(super) fn measure_all(c: &mut Circuit) {
    for q in 0..c.num_qubits() {
        c.measure(q, q);
    }
}

/// Neighbouring pairs along a line of `len` sites starting at `parity`;
/// with `periodic`, the pair wrapping from the last site to the first is
/// included.
fn row_pairs(len: usize, parity: usize, periodic: bool) -> Vec<(usize, usize)> {
    (parity..len)
        .step_by(2)
        .filter_map(|a| {
            let b = a + 1;
            if b < len {
                Some((a, b))
            } else if periodic && len > 2 {
                Some((a, 0))
            } else {
                None
            }
        })
        .collect()
}

/// `k` layers of nearest-neighbour gates on a chain; each layer is a row
/// on pairs `(2i, 2i+1)` followed by a row on `(2i+1, 2i+2)`.
pub fn brickwork_1d(n: usize, k: usize, periodic: bool, source: GateSource) -> Result<Circuit> {
    if n < 4 || (periodic && n % 2 == 1) {
        return Err(Error::InvalidArgument(format!(
            "1D brickwork needs N >= 4 (even when periodic), got {n}"
        )));
    }
    let mut c = Circuit::new(n, n);
    prepare_all(&mut c);
    let mut site = 0;
    for _ in 0..k {
        for parity in 0..2 {
            for (a, b) in row_pairs(n, parity, periodic) {
                place(&mut c, &source, &mut site, &[a, b]);
            }
        }
    }
    measure_all(&mut c);
    Ok(c)
}

/// `k` layers on an `nx`×`ny` grid (qubit `y·nx + x`); each layer is a
/// horizontal even row, horizontal odd row, vertical even row and vertical
/// odd row.
pub fn brickwork_2d(nx: usize, ny: usize, k: usize, periodic: bool, source: GateSource) -> Result<Circuit> {
    if nx < 4 || ny < 4 || (periodic && (nx % 2 == 1 || ny % 2 == 1)) {
        return Err(Error::InvalidArgument(format!(
            "2D brickwork needs dimensions >= 4 (even when periodic), got {nx}x{ny}"
        )));
    }
    let idx = |x: usize, y: usize| y * nx + x;
    let mut c = Circuit::new(nx * ny, nx * ny);
    prepare_all(&mut c);
    let mut site = 0;
    for _ in 0..k {
        for parity in 0..2 {
            for y in 0..ny {
                for (a, b) in row_pairs(nx, parity, periodic) {
                    place(&mut c, &source, &mut site, &[idx(a, y), idx(b, y)]);
                }
            }
        }
        for parity in 0..2 {
            for x in 0..nx {
                for (a, b) in row_pairs(ny, parity, periodic) {
                    place(&mut c, &source, &mut site, &[idx(x, a), idx(x, b)]);
                }
            }
        }
    }
    measure_all(&mut c);
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::validate;

    #[test]
    fn pairs() {
        assert_eq!(row_pairs(6, 1, true), vec![(1, 2), (3, 4), (5, 0)]);
        assert_eq!(row_pairs(6, 1, false), vec![(1, 2), (3, 4)]);
        assert_eq!(row_pairs(5, 0, false), vec![(0, 1), (2, 3)]);
    }

    #[test]
    fn one_d_counts() {
        let c = brickwork_1d(8, 1, true, GateSource::NamedFixed).unwrap();
        assert_eq!((c.gate_count(), c.count_kind("prep"), c.count_kind("measure")), (8, 8, 8));
        assert!(validate(&c).is_empty());
        assert_eq!(brickwork_1d(8, 2, true, GateSource::NamedFixed).unwrap().gate_count(), 16);
        assert_eq!(brickwork_1d(7, 1, false, GateSource::NamedFixed).unwrap().gate_count(), 6);
        assert!(brickwork_1d(7, 1, true, GateSource::NamedFixed).is_err());
        assert!(brickwork_1d(2, 1, false, GateSource::NamedFixed).is_err());
    }

    #[test]
    fn two_d_counts() {
        let c = brickwork_2d(4, 4, 1, true, GateSource::SeededHaarRandom { seed: 1 }).unwrap();
        assert_eq!(c.gate_count(), 32);
        assert!(validate(&c).is_empty());
        assert!(brickwork_2d(5, 4, 1, true, GateSource::NamedFixed).is_err());
    }
}
