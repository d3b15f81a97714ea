use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Counts;
use crate::compiler::PhysicalCircuit;
use crate::error::{Error, Result};
use crate::sim::run_gates;

/// Something that can run a circuit and return measured counts.
pub trait SamplingBackend: Send + Sync {
    fn name(&self) -> &str;

    /// Counts keyed by logical-order bitstrings; must sum to `shots`.
    fn sample(&self, circuit: &PhysicalCircuit, shots: u64, seed: u64) -> Result<Counts>;
}

/// Exact statevector simulation followed by seeded multinomial sampling.
#[derive(Debug, Clone, Copy, Default)]
pub struct LocalSampler;

impl SamplingBackend for LocalSampler {
    fn name(&self) -> &str {
        "local"
    }

    fn sample(&self, circuit: &PhysicalCircuit, shots: u64, seed: u64) -> Result<Counts> {
        let psi = run_gates(circuit.num_qubits(), circuit.gates())?;
        let probs = psi.probabilities();
        let dist = WeightedIndex::new(&probs)
            .map_err(|e| Error::Model(format!("degenerate output distribution: {e}")))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut hits = vec![0u64; probs.len()];
        for _ in 0..shots {
            hits[dist.sample(&mut rng)] += 1;
        }
        let layout = circuit.final_layout();
        let mut counts = Counts::new();
        for (x, &k) in hits.iter().enumerate() {
            if k > 0 {
                let bits: String = layout
                    .iter()
                    .map(|&p| if (x >> p) & 1 == 1 { '1' } else { '0' })
                    .collect();
                *counts.entry(bits).or_default() += k;
            }
        }
        Ok(counts)
    }
}
