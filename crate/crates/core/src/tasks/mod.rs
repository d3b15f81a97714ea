//! Sampling jobs: a persistent task store, a background executor, a local
//! statevector sampler, and ranking of sampled bitstrings.
//!
//! Bitstrings are in logical order (character `l` is logical qubit `l`) and
//! map to spins as `z = 1 − 2·bit`, so `'0'` is `+1`.

mod results;
mod sampler;
mod service;
mod store;

use std::collections::BTreeMap;

pub use results::{
    colored_dot, process_results, qubo_assignment, RankedRow, RankedSolutions, PALETTE,
};
pub use sampler::{LocalSampler, SamplingBackend};
pub use service::TaskService;
pub use store::{TaskRecord, TaskStatus, TaskStore};

/// Bitstring → number of shots.
pub type Counts = BTreeMap<String, u64>;
