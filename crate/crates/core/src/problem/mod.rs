//! Problem modeling: application → QUBO → Ising → weight graph.

pub mod builders;
mod graph;
mod ising;
mod qubo;

pub use builders::SimpleGraph;
pub use graph::{Edge, WeightGraph};
pub use ising::{spins_from_bits, IsingModel};
pub use qubo::{QuboMatrix, Sense};

/// Full QUBO → weight graph conversion, offset carried along.
pub fn weight_graph_from_qubo(q: &QuboMatrix) -> WeightGraph {
    WeightGraph::from_ising(&IsingModel::from_qubo(q))
}
