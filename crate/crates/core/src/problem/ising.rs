use std::collections::BTreeMap;

use super::qubo::QuboMatrix;

/// Classical Ising model `H(s) = Σ_{i<j} J_ij s_i s_j + Σ_i h_i s_i` plus the constant
/// that makes `H(2x−1) + offset` equal the QUBO value it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingModel {
    pub n: usize,
    /// Keys always satisfy `i < j`.
    pub couplings: BTreeMap<(usize, usize), f64>,
    pub bias: Vec<f64>,
    pub offset: f64,
}

impl IsingModel {
    /// Substitutes `x_i = (s_i + 1) / 2` into `xᵀQx + offset`.
    pub fn from_qubo(q: &QuboMatrix) -> Self {
        let n = q.n();
        let mut couplings = BTreeMap::new();
        let mut bias = vec![0.0; n];
        let mut offset = q.offset();
        for i in 0..n {
            let d = q.get(i, i);
            bias[i] += 0.5 * d;
            offset += 0.5 * d;
            for j in (i + 1)..n {
                // (Q_ij + Q_ji) x_i x_j = (Q_ij + Q_ji)/4 · (s_i s_j + s_i + s_j + 1)
                let quarter = 0.25 * (q.get(i, j) + q.get(j, i));
                if quarter != 0.0 {
                    couplings.insert((i, j), quarter);
                }
                bias[i] += quarter;
                bias[j] += quarter;
                offset += quarter;
            }
        }
        IsingModel {
            n,
            couplings,
            bias,
            offset,
        }
    }

    /// `H(s)` without the offset. Spins are ±1.
    pub fn energy(&self, spins: &[i8]) -> f64 {
        assert_eq!(spins.len(), self.n, "spin vector length");
        let mut e: f64 = self
            .bias
            .iter()
            .zip(spins)
            .map(|(h, &s)| h * f64::from(s))
            .sum();
        for (&(i, j), &c) in &self.couplings {
            e += c * f64::from(spins[i] * spins[j]);
        }
        e
    }
}

/// `s = 2x − 1`.
pub fn spins_from_bits(x: &[bool]) -> Vec<i8> {
    x.iter().map(|&b| if b { 1 } else { -1 }).collect()
}
