//! Structured compilation onto a linear chain: template → initial-mapping
//! search → scheduling → CNOT/RZ decomposition → peephole optimization.

mod physical;
mod schedule;
mod search;
mod template;

pub use physical::{asap_layers, decompose_gates, optimize_circuit, PhysicalCircuit};
pub use schedule::{schedule, LayerRole, ScheduledCircuit, ScheduledLayer};
pub use search::{mapping_cost, placement_order, search_initial_mapping, Mapping, SearchOptions};
pub use template::{ExeRTable, LayerKind, Template};

use crate::engine::QaoaParams;
use crate::error::{Error, Result};
use crate::problem::WeightGraph;

/// Everything the pipeline produced, intermediate stages included.
#[derive(Debug, Clone)]
pub struct Compiled {
    /// Optimized native circuit.
    pub circuit: PhysicalCircuit,
    pub scheduled: ScheduledCircuit,
    pub mapping: Mapping,
    /// Search's predicted last RZZ cycle of the first cost block.
    pub predicted_last_cycle: usize,
    /// Template cycles across all cost blocks, before decomposition.
    pub depth_pre: usize,
    /// Dependency depth right after decomposition, before cancellation.
    pub depth_decomposed: usize,
    pub cnot_decomposed: usize,
}

impl Compiled {
    pub fn depth_post(&self) -> usize {
        self.circuit.depth()
    }

    pub fn cnot_count(&self) -> usize {
        self.circuit.cnot_count()
    }
}

/// Compiles `g` with angles `params` onto the first `g.num_nodes()` qubits of
/// `chain` (chip qubit ids along a coupled path).
pub fn compile(
    g: &WeightGraph,
    params: &QaoaParams,
    chain: &[u32],
    options: SearchOptions,
) -> Result<Compiled> {
    let n = g.num_nodes();
    if chain.len() < n {
        return Err(Error::Capacity(format!(
            "graph needs {n} qubits but the chain has {}",
            chain.len()
        )));
    }
    let chain = &chain[..n];
    let (template, mapping, predicted) = if g.num_edges() == 0 {
        (None, Mapping::identity(n), 0)
    } else {
        let template = Template::new(n)?;
        let exer = ExeRTable::from_template(&template);
        let (mapping, cost) = search_initial_mapping(g, &exer, options)?;
        (Some(template), mapping, cost)
    };
    let scheduled = schedule(g, &mapping, template.as_ref(), params)?;
    let decomposed = decompose_gates(&scheduled, chain)?;
    let circuit = optimize_circuit(&decomposed);
    Ok(Compiled {
        depth_pre: scheduled.cost_depth(),
        depth_decomposed: decomposed.depth(),
        cnot_decomposed: decomposed.cnot_count(),
        circuit,
        scheduled,
        mapping,
        predicted_last_cycle: predicted,
    })
}

/// Positions `0..n` as chip ids, for compiling without calibration data.
pub fn ideal_chain(n: usize) -> Vec<u32> {
    (0..n as u32).collect()
}
