use num_complex::Complex64;

use crate::matrix::Matrix;

/// Dense state of `n` qubits; basis index bit `q` is qubit `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// All qubits in |0⟩.
    pub fn zero(num_qubits: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Self { num_qubits, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies `u` to `qubits`; `qubits[0]` is the most significant bit of
    /// the gate's local index.
    pub fn apply(&mut self, u: &Matrix, qubits: &[usize]) {
        let k = qubits.len();
        let dim = 1usize << k;
        debug_assert_eq!(u.dim(), dim);
        // Bit of the global index for each local bit position (LSB first).
        let masks: Vec<usize> = (0..k).map(|j| 1usize << qubits[k - 1 - j]).collect();
        let all: usize = masks.iter().sum();
        let offsets: Vec<usize> = (0..dim)
            .map(|l| (0..k).filter(|j| l >> j & 1 == 1).map(|j| masks[j]).sum())
            .collect();
        let mut local = vec![Complex64::new(0.0, 0.0); dim];
        for base in 0..self.amps.len() {
            if base & all != 0 {
                continue;
            }
            for (l, off) in offsets.iter().enumerate() {
                local[l] = self.amps[base | off];
            }
            for (r, off) in offsets.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (c, v) in local.iter().enumerate() {
                    acc += u.get(r, c) * v;
                }
                self.amps[base | off] = acc;
            }
        }
    }

    /// Probability that measuring `q` gives 1.
    pub fn probability_one(&self, q: usize) -> f64 {
        let bit = 1usize << q;
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Projects qubit `q` onto `outcome` and renormalizes by `1/sqrt(prob)`.
    pub fn project(&mut self, q: usize, outcome: bool, prob: f64) {
        let bit = 1usize << q;
        let scale = 1.0 / prob.sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            if (i & bit != 0) == outcome {
                *a *= scale;
            } else {
                *a = Complex64::new(0.0, 0.0);
            }
        }
    }

    /// Flips qubit `q`.
    pub fn flip(&mut self, q: usize) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                self.amps.swap(i, i | bit);
            }
        }
    }
}
