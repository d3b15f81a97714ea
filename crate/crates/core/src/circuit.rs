//! Gate set and logical (unscheduled) circuits.

use crate::error::{Error, Result};

/// A gate on qubit indices. Angles are in radians with
/// `RX(θ) = exp(−iθX/2)`, `RZ(θ) = exp(−iθZ/2)`, `RZZ(θ) = exp(−iθZ⊗Z/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    H(usize),
    Rx(usize, f64),
    Rz(usize, f64),
    Rzz(usize, usize, f64),
    Swap(usize, usize),
    Cnot { control: usize, target: usize },
}

impl Gate {
    pub fn cnot(control: usize, target: usize) -> Gate {
        Gate::Cnot { control, target }
    }

    /// Operands, first operand first.
    pub fn qubits(&self) -> ([usize; 2], usize) {
        match *self {
            Gate::H(q) | Gate::Rx(q, _) | Gate::Rz(q, _) => ([q, q], 1),
            Gate::Rzz(a, b, _) | Gate::Swap(a, b) => ([a, b], 2),
            Gate::Cnot { control, target } => ([control, target], 2),
        }
    }

    pub fn operands(&self) -> Vec<usize> {
        let (qs, k) = self.qubits();
        qs[..k].to_vec()
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Rx(_, t) | Gate::Rz(_, t) | Gate::Rzz(_, _, t) => Some(t),
            _ => None,
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        self.qubits().1 == 2
    }

    /// Same gate with every operand passed through `f`.
    pub fn relabel(&self, f: impl Fn(usize) -> usize) -> Gate {
        match *self {
            Gate::H(q) => Gate::H(f(q)),
            Gate::Rx(q, t) => Gate::Rx(f(q), t),
            Gate::Rz(q, t) => Gate::Rz(f(q), t),
            Gate::Rzz(a, b, t) => Gate::Rzz(f(a), f(b), t),
            Gate::Swap(a, b) => Gate::Swap(f(a), f(b)),
            Gate::Cnot { control, target } => Gate::cnot(f(control), f(target)),
        }
    }

    pub(crate) fn validate(&self, n: usize) -> Result<()> {
        let (qs, k) = self.qubits();
        for &q in &qs[..k] {
            if q >= n {
                return Err(Error::Model(format!(
                    "{self:?} uses qubit {q} outside 0..{n}"
                )));
            }
        }
        if k == 2 && qs[0] == qs[1] {
            return Err(Error::Model(format!("{self:?} repeats an operand")));
        }
        Ok(())
    }
}

/// Ordered gate list over `n` logical qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct LogicalCircuit {
    n: usize,
    gates: Vec<Gate>,
}

impl LogicalCircuit {
    pub fn new(n: usize) -> Self {
        LogicalCircuit {
            n,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(n: usize, gates: Vec<Gate>) -> Result<Self> {
        for g in &gates {
            g.validate(n)?;
        }
        Ok(LogicalCircuit { n, gates })
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }
}
