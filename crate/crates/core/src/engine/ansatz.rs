use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{Gate, LogicalCircuit};
use crate::error::{Error, Result};
use crate::problem::WeightGraph;
use crate::sim::StateVector;

/// Variational angles of a depth-`p` QAOA circuit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaoaParams {
    pub gamma: Vec<f64>,
    pub beta: Vec<f64>,
}

impl QaoaParams {
    pub fn new(gamma: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        if gamma.is_empty() || gamma.len() != beta.len() {
            return Err(Error::Config(format!(
                "need p ≥ 1 and equal-length angle lists, got {} gammas and {} betas",
                gamma.len(),
                beta.len()
            )));
        }
        Ok(QaoaParams { gamma, beta })
    }

    pub fn p(&self) -> usize {
        self.gamma.len()
    }

    pub fn zeros(p: usize) -> Self {
        QaoaParams {
            gamma: vec![0.0; p],
            beta: vec![0.0; p],
        }
    }

    /// `[γ_1..γ_p, β_1..β_p]`, the vector handed to the optimizers.
    pub fn to_vec(&self) -> Vec<f64> {
        self.gamma.iter().chain(&self.beta).copied().collect()
    }

    pub fn from_slice(x: &[f64]) -> Self {
        let p = x.len() / 2;
        QaoaParams {
            gamma: x[..p].to_vec(),
            beta: x[p..].to_vec(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("angles serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: QaoaParams = serde_json::from_str(text).map_err(|e| {
            Error::parse(
                format!("line {} column {}", e.line(), e.column()),
                e.to_string(),
            )
        })?;
        QaoaParams::new(p.gamma, p.beta)
    }
}

/// Interp initialization: depth-`p` angles → depth-`p+1` starting point,
/// `x'_i = (i−1)/p · x_{i−1} + (p−i+1)/p · x_i` for `i = 1..p+1` with
/// `x_0 = x_{p+1} = 0`.
pub fn interp(prev: &QaoaParams) -> QaoaParams {
    fn lift(x: &[f64]) -> Vec<f64> {
        let p = x.len();
        let at = |i: usize| if i == 0 || i > p { 0.0 } else { x[i - 1] };
        (1..=p + 1)
            .map(|i| {
                let lo = (i - 1) as f64 / p as f64;
                let hi = (p + 1 - i) as f64 / p as f64;
                lo * at(i - 1) + hi * at(i)
            })
            .collect()
    }
    QaoaParams {
        gamma: lift(&prev.gamma),
        beta: lift(&prev.beta),
    }
}

/// H on every qubit, then per layer `RZZ(2γ_k J_uv)` for each edge in `(u, v)`
/// order, `RZ(2γ_k h_i)` for each nonzero node weight, and `RX(2β_k)` on every qubit.
pub fn build_qaoa_circuit(g: &WeightGraph, params: &QaoaParams) -> LogicalCircuit {
    let n = g.num_nodes();
    let mut gates = Vec::new();
    gates.extend((0..n).map(Gate::H));
    for (&gamma, &beta) in params.gamma.iter().zip(&params.beta) {
        for e in g.edges() {
            gates.push(Gate::Rzz(e.u, e.v, 2.0 * gamma * e.w));
        }
        for (i, &h) in g.node_weights().iter().enumerate() {
            if h != 0.0 {
                gates.push(Gate::Rz(i, 2.0 * gamma * h));
            }
        }
        gates.extend((0..n).map(|i| Gate::Rx(i, 2.0 * beta)));
    }
    LogicalCircuit::from_gates(n, gates).expect("graph nodes index the register")
}

/// `C(z)` for every basis index, with `z_i = +1` when bit `i` is 0.
pub fn cost_diagonal(g: &WeightGraph) -> Vec<f64> {
    let n = g.num_nodes();
    let mut diag = vec![0.0; 1 << n];
    let mut z = vec![1i8; n];
    for (idx, d) in diag.iter_mut().enumerate() {
        for (i, zi) in z.iter_mut().enumerate() {
            *zi = 1 - 2 * ((idx >> i) & 1) as i8;
        }
        *d = g.energy_unchecked(&z);
    }
    diag
}

/// The QAOA state, applying each cost layer as the diagonal `exp(−iγC)` directly.
/// Equal to simulating [`build_qaoa_circuit`].
pub(crate) fn qaoa_state(
    g: &WeightGraph,
    diag: &[f64],
    params: &QaoaParams,
) -> Result<StateVector> {
    let n = g.num_nodes();
    let mut psi = StateVector::zero(n)?;
    for q in 0..n {
        psi.apply(&Gate::H(q));
    }
    let mut amps = psi;
    for (&gamma, &beta) in params.gamma.iter().zip(&params.beta) {
        amps.apply_diagonal(|idx| Complex64::from_polar(1.0, -gamma * diag[idx]));
        for q in 0..n {
            amps.apply(&Gate::Rx(q, 2.0 * beta));
        }
    }
    Ok(amps)
}
