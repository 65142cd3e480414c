use crate::circuit::Circuit;
use crate::error::{Error, Result};

/// Bernstein–Vazirani circuit for the hidden bitstring `secret` (a string
/// of `0`/`1`, character `i` for register qubit `i`). Register qubits are
/// `0..N` and are measured into clbits `0..N`; the ancilla is qubit `N`
/// and is traced out.
pub fn bernstein_vazirani(n: usize, secret: &str) -> Result<Circuit> {
    let bits: Vec<bool> = secret
        .chars()
        .map(|ch| match ch {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::InvalidArgument(format!("secret must be binary, found {other:?}"))),
        })
        .collect::<Result<_>>()?;
    if bits.len() != n || n == 0 {
        return Err(Error::InvalidArgument(format!(
            "secret has {} bits but N = {n}",
            bits.len()
        )));
    }
    let anc = n;
    let mut c = Circuit::new(n + 1, n);
    for q in 0..=n {
        c.prepare(q);
    }
    for q in 0..n {
        c.named("h", &[], &[q]);
    }
    c.named("x", &[], &[anc]).named("h", &[], &[anc]);
    for (q, _) in bits.iter().enumerate().filter(|(_, b)| **b) {
        c.named("cx", &[], &[q, anc]);
    }
    for q in 0..n {
        c.named("h", &[], &[q]);
    }
    for q in 0..n {
        c.measure(q, q);
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::validate;

    #[test]
    fn cx_count_follows_secret() {
        let c = bernstein_vazirani(8, "11101011").unwrap();
        assert!(validate(&c).is_empty());
        assert_eq!(c.gates().filter(|(_, g)| g.label == "cx").count(), 6);
        assert!(bernstein_vazirani(3, "1011").is_err());
        assert!(bernstein_vazirani(2, "12").is_err());
    }
}
