//! Native-gate circuits: decomposition of RZZ/SWAP into CNOT + RZ, adjacent
//! CNOT cancellation, and ASAP re-layering.

use super::schedule::ScheduledCircuit;
use crate::circuit::Gate;
use crate::error::{Error, Result};

/// Cycle-layered circuit over `n` chain positions using only H, RX, RZ and CNOT.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalCircuit {
    n: usize,
    cycles: Vec<Vec<Gate>>,
    /// Logical qubit → position holding it at measurement time.
    final_layout: Vec<usize>,
    /// Chip qubit id of each position.
    chain: Vec<u32>,
}

impl PhysicalCircuit {
    pub fn new(
        n: usize,
        cycles: Vec<Vec<Gate>>,
        final_layout: Vec<usize>,
        chain: Vec<u32>,
    ) -> Result<Self> {
        if chain.len() != n {
            return Err(Error::Config(format!(
                "chain lists {} qubits for a {n}-position circuit",
                chain.len()
            )));
        }
        let mut measured = vec![false; n];
        for (l, &p) in final_layout.iter().enumerate() {
            if p >= n || std::mem::replace(&mut measured[p], true) {
                return Err(Error::Config(format!(
                    "logical qubit {l} is measured from invalid or shared position {p}"
                )));
            }
        }
        for (c, layer) in cycles.iter().enumerate() {
            let mut busy = vec![false; n];
            for g in layer {
                g.validate(n)?;
                if matches!(g, Gate::Rzz(..) | Gate::Swap(..)) {
                    return Err(Error::Config(format!("{g:?} is not a native gate")));
                }
                if let Gate::Cnot { control, target } = *g {
                    if control.abs_diff(target) != 1 {
                        return Err(Error::Config(format!(
                            "CNOT({control}, {target}) acts on non-adjacent positions"
                        )));
                    }
                }
                for q in g.operands() {
                    if std::mem::replace(&mut busy[q], true) {
                        return Err(Error::Config(format!(
                            "position {q} is used twice in cycle {}",
                            c + 1
                        )));
                    }
                }
            }
        }
        Ok(PhysicalCircuit {
            n,
            cycles,
            final_layout,
            chain,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn num_logical(&self) -> usize {
        self.final_layout.len()
    }

    pub fn cycles(&self) -> &[Vec<Gate>] {
        &self.cycles
    }

    pub fn final_layout(&self) -> &[usize] {
        &self.final_layout
    }

    pub fn chain(&self) -> &[u32] {
        &self.chain
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.cycles.iter().flatten()
    }

    pub fn gate_count(&self) -> usize {
        self.cycles.iter().map(Vec::len).sum()
    }

    pub fn cnot_count(&self) -> usize {
        self.gates()
            .filter(|g| matches!(g, Gate::Cnot { .. }))
            .count()
    }

    /// Longest path in the gate dependency graph, every gate costing one.
    pub fn depth(&self) -> usize {
        let mut ready = vec![0usize; self.n];
        let mut depth = 0;
        for g in self.gates() {
            let ops = g.operands();
            let at = ops.iter().map(|&q| ready[q]).max().unwrap_or(0) + 1;
            for q in ops {
                ready[q] = at;
            }
            depth = depth.max(at);
        }
        depth
    }

    /// Chip qubit id each logical qubit is read from.
    pub fn logical_to_physical(&self) -> Vec<u32> {
        self.final_layout.iter().map(|&p| self.chain[p]).collect()
    }

    /// `{"logical_to_physical": [...], "measure_order": [...], "chain": [...]}`;
    /// `measure_order[l]` is the register index read into classical bit `l`.
    pub fn layout_json(&self) -> String {
        serde_json::json!({
            "logical_to_physical": self.logical_to_physical(),
            "measure_order": self.final_layout,
            "chain": self.chain,
        })
        .to_string()
    }
}

/// Puts each gate in the earliest cycle after every earlier gate sharing a qubit.
pub fn asap_layers(n: usize, gates: impl IntoIterator<Item = Gate>) -> Vec<Vec<Gate>> {
    let mut ready = vec![0usize; n];
    let mut cycles: Vec<Vec<Gate>> = Vec::new();
    for g in gates {
        let ops = g.operands();
        let at = ops.iter().map(|&q| ready[q]).max().unwrap_or(0);
        for q in ops {
            ready[q] = at + 1;
        }
        if cycles.len() <= at {
            cycles.resize_with(at + 1, Vec::new);
        }
        cycles[at].push(g);
    }
    cycles
}

/// `RZZ(θ)(a,b) → CX(a,b) · RZ(θ)(b) · CX(a,b)` and
/// `SWAP(a,b) → CX(a,b) · CX(b,a) · CX(a,b)`; other gates pass through. Each
/// scheduled layer becomes up to three cycles. Operands are positions; the
/// circuit is attached to `chain`.
pub fn decompose_gates(s: &ScheduledCircuit, chain: &[u32]) -> Result<PhysicalCircuit> {
    let mut cycles = Vec::new();
    for layer in &s.layers {
        let mut sub: [Vec<Gate>; 3] = Default::default();
        for &g in &layer.gates {
            match g {
                Gate::Rzz(a, b, t) => {
                    sub[0].push(Gate::cnot(a, b));
                    sub[1].push(Gate::Rz(b, t));
                    sub[2].push(Gate::cnot(a, b));
                }
                Gate::Swap(a, b) => {
                    sub[0].push(Gate::cnot(a, b));
                    sub[1].push(Gate::cnot(b, a));
                    sub[2].push(Gate::cnot(a, b));
                }
                other => sub[0].push(other),
            }
        }
        cycles.extend(sub.into_iter().filter(|c| !c.is_empty()));
    }
    PhysicalCircuit::new(s.n, cycles, s.final_layout.clone(), chain.to_vec())
}

/// Removes pairs of identical CNOTs with no gate between them on either qubit
/// (repeatedly, so newly adjacent pairs also cancel), then re-layers ASAP.
pub fn optimize_circuit(pc: &PhysicalCircuit) -> PhysicalCircuit {
    let gates: Vec<Gate> = pc.gates().copied().collect();
    let mut alive = vec![true; gates.len()];
    // per-qubit stack of live gate indices; the top is the latest gate on that qubit
    let mut stacks: Vec<Vec<usize>> = vec![Vec::new(); pc.n];
    for (i, g) in gates.iter().enumerate() {
        if let Gate::Cnot { control, target } = *g {
            let top_c = stacks[control].last().copied();
            if let Some(j) = top_c.filter(|&j| Some(j) == stacks[target].last().copied()) {
                if gates[j] == *g {
                    alive[j] = false;
                    alive[i] = false;
                    stacks[control].pop();
                    stacks[target].pop();
                    continue;
                }
            }
        }
        for q in g.operands() {
            stacks[q].push(i);
        }
    }
    let kept = gates
        .into_iter()
        .zip(alive)
        .filter_map(|(g, keep)| keep.then_some(g));
    PhysicalCircuit {
        n: pc.n,
        cycles: asap_layers(pc.n, kept),
        final_layout: pc.final_layout.clone(),
        chain: pc.chain.clone(),
    }
}
