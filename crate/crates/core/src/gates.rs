//! Standard gate library and seeded gate sources.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::matrix::Matrix;

/// Suffix marking the adjoint of a gate label.
pub const DAGGER: char = '†';

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Splits a label into its base name and whether an odd number of daggers
/// is attached.
pub fn split_dagger(label: &str) -> (&str, bool) {
    let base = label.trim_end_matches(DAGGER);
    let count = (label.len() - base.len()) / DAGGER.len_utf8();
    (base, count % 2 == 1)
}

/// Label of the adjoint gate. `"x†"` maps back to `"x"`.
pub fn dagger_label(label: &str) -> String {
    match label.strip_suffix(DAGGER) {
        Some(base) => base.to_string(),
        None => format!("{label}{DAGGER}"),
    }
}

/// Matrix of a named library gate, or `None` for unknown labels and
/// parameter/arity mismatches.
pub fn library_matrix(label: &str, params: &[f64], arity: usize) -> Option<Matrix> {
    let (base, adjoint) = split_dagger(label);
    let m = base_matrix(base, params, arity)?;
    Some(if adjoint { m.adjoint() } else { m })
}

fn base_matrix(name: &str, params: &[f64], arity: usize) -> Option<Matrix> {
    let fixed = |n: usize, a: usize| params.len() == n && arity == a;
    let m = match name {
        "id" if fixed(0, 1) => Matrix::identity(2),
        "h" if fixed(0, 1) => {
            let h = FRAC_1_SQRT_2;
            Matrix::from_row_major(vec![c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)])?
        }
        "x" if fixed(0, 1) => {
            Matrix::from_row_major(vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])?
        }
        "y" if fixed(0, 1) => {
            Matrix::from_row_major(vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])?
        }
        "z" if fixed(0, 1) => Matrix::diagonal(&[c(1.0, 0.0), c(-1.0, 0.0)]),
        "s" if fixed(0, 1) => Matrix::diagonal(&[c(1.0, 0.0), c(0.0, 1.0)]),
        "t" if fixed(0, 1) => Matrix::diagonal(&[c(1.0, 0.0), Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)]),
        "rx" if fixed(1, 1) => {
            let (s, co) = (params[0] / 2.0).sin_cos();
            Matrix::from_row_major(vec![c(co, 0.0), c(0.0, -s), c(0.0, -s), c(co, 0.0)])?
        }
        "ry" if fixed(1, 1) => {
            let (s, co) = (params[0] / 2.0).sin_cos();
            Matrix::from_row_major(vec![c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)])?
        }
        "rz" if fixed(1, 1) => {
            let half = params[0] / 2.0;
            Matrix::diagonal(&[Complex64::from_polar(1.0, -half), Complex64::from_polar(1.0, half)])
        }
        "cx" if fixed(0, 2) => controlled_x(2),
        "cz" if fixed(0, 2) => Matrix::diagonal(&[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]),
        "swap" if fixed(0, 2) => {
            let mut m = Matrix::identity(4).entries().to_vec();
            m[5] = c(0.0, 0.0);
            m[10] = c(0.0, 0.0);
            m[6] = c(1.0, 0.0);
            m[9] = c(1.0, 0.0);
            Matrix::from_row_major(m)?
        }
        "rzz" if fixed(1, 2) => {
            let half = params[0] / 2.0;
            let (minus, plus) = (Complex64::from_polar(1.0, -half), Complex64::from_polar(1.0, half));
            Matrix::diagonal(&[minus, plus, plus, minus])
        }
        // Multi-controlled X: every qubit but the last is a control.
        "mcx" if params.is_empty() && arity >= 2 => controlled_x(arity),
        _ => return None,
    };
    Some(m)
}

fn controlled_x(arity: usize) -> Matrix {
    let n = 1usize << arity;
    let mut data = vec![c(0.0, 0.0); n * n];
    for row in 0..n {
        // Controls are the high bits; the target is bit 0.
        let col = if row >> 1 == (n >> 1) - 1 { row ^ 1 } else { row };
        data[row * n + col] = c(1.0, 0.0);
    }
    Matrix::from_row_major(data).expect("square by construction")
}

/// Where structured-circuit generators take their gate contents from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum GateSource {
    /// `cx` for two-qubit sites, `mcx` for wider ones.
    NamedFixed,
    /// Haar-random unitaries; site `i` draws from stream `i` of `seed`.
    SeededHaarRandom { seed: u64 },
}

/// Label used for Haar-random gates.
pub const HAAR_LABEL: &str = "U";

impl GateSource {
    /// Label and matrix for the gate at generator site `site`.
    pub fn gate_for_site(&self, site: u64, arity: usize) -> (String, Matrix) {
        match *self {
            GateSource::NamedFixed => {
                let label = if arity == 2 { "cx" } else { "mcx" };
                let m = library_matrix(label, &[], arity).expect("library gate");
                (label.to_string(), m)
            }
            GateSource::SeededHaarRandom { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(site);
                (HAAR_LABEL.to_string(), Matrix::haar_random(arity, &mut rng))
            }
        }
    }
}
