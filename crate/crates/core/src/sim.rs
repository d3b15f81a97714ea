//! Dense statevector simulator. Qubit 0 is the least-significant bit of the
//! basis-state index.

use num_complex::Complex64;

use crate::circuit::{Gate, LogicalCircuit};
use crate::error::{Error, Result};

/// Largest register the simulator accepts.
pub const MAX_QUBITS: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` on `n` qubits.
    pub fn zero(n: usize) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::Capacity(format!(
                "{n} qubits exceeds the simulator limit of {MAX_QUBITS}"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn apply(&mut self, gate: &Gate) {
        match *gate {
            Gate::H(q) => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                self.single(q, |a0, a1| ((a0 + a1) * s, (a0 - a1) * s));
            }
            Gate::Rx(q, t) => {
                let c = (t / 2.0).cos();
                let ms = Complex64::new(0.0, -(t / 2.0).sin());
                self.single(q, |a0, a1| (a0 * c + a1 * ms, a0 * ms + a1 * c));
            }
            Gate::Rz(q, t) => {
                let phase = [
                    Complex64::from_polar(1.0, -t / 2.0),
                    Complex64::from_polar(1.0, t / 2.0),
                ];
                let bit = 1usize << q;
                for (i, a) in self.amps.iter_mut().enumerate() {
                    *a *= phase[usize::from(i & bit != 0)];
                }
            }
            Gate::Rzz(p, q, t) => {
                let phase = [
                    Complex64::from_polar(1.0, -t / 2.0),
                    Complex64::from_polar(1.0, t / 2.0),
                ];
                for (i, a) in self.amps.iter_mut().enumerate() {
                    let parity = ((i >> p) ^ (i >> q)) & 1;
                    *a *= phase[parity];
                }
            }
            Gate::Swap(p, q) => {
                for i in 0..self.amps.len() {
                    if (i >> p) & 1 == 1 && (i >> q) & 1 == 0 {
                        let j = i ^ (1 << p) ^ (1 << q);
                        self.amps.swap(i, j);
                    }
                }
            }
            Gate::Cnot { control, target } => {
                for i in 0..self.amps.len() {
                    if (i >> control) & 1 == 1 && (i >> target) & 1 == 0 {
                        self.amps.swap(i, i | (1 << target));
                    }
                }
            }
        }
    }

    /// Multiplies amplitude `i` by `phase(i)`.
    pub fn apply_diagonal(&mut self, phase: impl Fn(usize) -> Complex64) {
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a *= phase(i);
        }
    }

    fn single(&mut self, q: usize, f: impl Fn(Complex64, Complex64) -> (Complex64, Complex64)) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a0, a1) = f(self.amps[i], self.amps[i | bit]);
                self.amps[i] = a0;
                self.amps[i | bit] = a1;
            }
        }
    }
}

/// Runs `c` from `|0…0⟩`.
pub fn simulate(c: &LogicalCircuit) -> Result<StateVector> {
    run_gates(c.num_qubits(), c.gates())
}

pub fn run_gates<'a>(n: usize, gates: impl IntoIterator<Item = &'a Gate>) -> Result<StateVector> {
    let mut psi = StateVector::zero(n)?;
    for g in gates {
        psi.apply(g);
    }
    Ok(psi)
}
