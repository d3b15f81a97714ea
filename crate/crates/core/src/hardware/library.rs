//! Fidelity-ranked library of simple paths ("subchains") on a chip.

use std::collections::{BTreeMap, HashSet};
use std::sync::{Arc, RwLock};

use serde::Serialize;

use super::chip::ChipModel;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Subchain {
    /// Chip qubit ids along the path, smaller endpoint first.
    pub qubits: Vec<u32>,
    /// Two-qubit fidelity of each consecutive pair.
    pub links: Vec<f64>,
    /// Product of `links`.
    pub fidelity: f64,
}

impl Subchain {
    fn from_path(mut qubits: Vec<u32>, couplers: &BTreeMap<u32, Vec<(u32, f64)>>) -> Self {
        if qubits.first() > qubits.last() {
            qubits.reverse();
        }
        let links: Vec<f64> = qubits
            .windows(2)
            .map(|w| {
                couplers[&w[0]]
                    .iter()
                    .find(|&&(q, _)| q == w[1])
                    .map(|&(_, f)| f)
                    .expect("consecutive qubits are coupled")
            })
            .collect();
        let fidelity = links.iter().product();
        Subchain {
            qubits,
            links,
            fidelity,
        }
    }

    pub fn len(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qubits.is_empty()
    }

    /// Best contiguous `k`-window by fidelity product (first on ties).
    pub fn best_window(&self, k: usize) -> Subchain {
        assert!(
            (2..=self.len()).contains(&k),
            "window length {k} for a {}-chain",
            self.len()
        );
        let mut best = 0;
        let mut best_f = f64::NEG_INFINITY;
        for start in 0..=self.len() - k {
            let f: f64 = self.links[start..start + k - 1].iter().product();
            if f > best_f {
                best_f = f;
                best = start;
            }
        }
        Subchain {
            qubits: self.qubits[best..best + k].to_vec(),
            links: self.links[best..best + k - 1].to_vec(),
            fidelity: best_f,
        }
    }
}

/// Descending fidelity, then ascending path.
fn rank(a: &Subchain, b: &Subchain) -> std::cmp::Ordering {
    b.fidelity
        .total_cmp(&a.fidelity)
        .then_with(|| a.qubits.cmp(&b.qubits))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Keep the best `width` paths per length, growing them one coupler at either end.
    Beam { width: usize },
    /// Enumerate every simple path. Only for small chips.
    Exhaustive,
}

pub const DEFAULT_BEAM_WIDTH: usize = 64;
/// Largest chip accepted by [`SearchMode::Exhaustive`].
pub const EXHAUSTIVE_LIMIT: usize = 12;

/// Map from chain length to candidate paths, best first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubchainLibrary {
    pub entries: BTreeMap<usize, Vec<Subchain>>,
}

impl SubchainLibrary {
    /// Lengths `2..=max_len`; a length with no path maps to an empty list.
    pub fn build(chip: &ChipModel, max_len: usize, mode: SearchMode) -> Result<Self> {
        if max_len > chip.qubits.len() {
            return Err(Error::Capacity(format!(
                "chains of length {max_len} requested on a {}-qubit chip",
                chip.qubits.len()
            )));
        }
        match mode {
            SearchMode::Beam { width } => Ok(Self::beam(chip, max_len, width.max(1))),
            SearchMode::Exhaustive => {
                if chip.qubits.len() > EXHAUSTIVE_LIMIT {
                    return Err(Error::Capacity(format!(
                        "exhaustive path enumeration is limited to {EXHAUSTIVE_LIMIT} qubits"
                    )));
                }
                Ok(Self::exhaustive(chip, max_len))
            }
        }
    }

    fn beam(chip: &ChipModel, max_len: usize, width: usize) -> Self {
        let couplers = chip.coupling_map();
        let mut entries = BTreeMap::new();
        let mut beam: Vec<Subchain> = chip
            .couplers
            .iter()
            .map(|c| Subchain::from_path(vec![c.a, c.b], &couplers))
            .collect();
        for k in 2..=max_len {
            if k > 2 {
                let mut seen = HashSet::new();
                let mut next = Vec::new();
                for path in &beam {
                    let ends = [path.qubits[0], *path.qubits.last().expect("non-empty")];
                    for (side, &end) in ends.iter().enumerate() {
                        for &(q, _) in &couplers[&end] {
                            if path.qubits.contains(&q) {
                                continue;
                            }
                            let mut grown = path.qubits.clone();
                            if side == 0 {
                                grown.insert(0, q);
                            } else {
                                grown.push(q);
                            }
                            let sc = Subchain::from_path(grown, &couplers);
                            if seen.insert(sc.qubits.clone()) {
                                next.push(sc);
                            }
                        }
                    }
                }
                beam = next;
            }
            beam.sort_by(rank);
            beam.truncate(width);
            entries.insert(k, beam.clone());
        }
        SubchainLibrary { entries }
    }

    fn exhaustive(chip: &ChipModel, max_len: usize) -> Self {
        let couplers = chip.coupling_map();
        let mut by_len: BTreeMap<usize, Vec<Subchain>> =
            (2..=max_len).map(|k| (k, Vec::new())).collect();
        fn extend(
            path: &mut Vec<u32>,
            max_len: usize,
            couplers: &BTreeMap<u32, Vec<(u32, f64)>>,
            by_len: &mut BTreeMap<usize, Vec<Subchain>>,
        ) {
            if path.len() >= 2 && path[0] < *path.last().unwrap() {
                by_len
                    .get_mut(&path.len())
                    .unwrap()
                    .push(Subchain::from_path(path.clone(), couplers));
            }
            if path.len() == max_len {
                return;
            }
            let end = *path.last().unwrap();
            for &(q, _) in &couplers[&end] {
                if !path.contains(&q) {
                    path.push(q);
                    extend(path, max_len, couplers, by_len);
                    path.pop();
                }
            }
        }
        for q in chip.qubits.iter().map(|q| q.id) {
            extend(&mut vec![q], max_len, &couplers, &mut by_len);
        }
        for list in by_len.values_mut() {
            list.sort_by(rank);
        }
        SubchainLibrary { entries: by_len }
    }

    /// Best `k`-qubit chain: the head of the smallest non-empty length `≥ k`,
    /// cut down to its best `k`-window when longer.
    pub fn select(&self, k: usize) -> Result<Subchain> {
        if k < 2 {
            return Err(Error::Config(format!(
                "subchains have at least 2 qubits, asked for {k}"
            )));
        }
        self.entries
            .range(k..)
            .find_map(|(_, list)| list.first())
            .map(|head| {
                if head.len() == k {
                    head.clone()
                } else {
                    head.best_window(k)
                }
            })
            .ok_or_else(|| Error::Capacity(format!("no chain of {k} or more coupled qubits")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("library serializes")
    }
}

/// Shared, refreshable handle to the current library. Readers take a snapshot
/// and never see a half-built library.
#[derive(Debug)]
pub struct SubchainRegistry {
    current: RwLock<Arc<SubchainLibrary>>,
    max_len: usize,
    mode: SearchMode,
}

impl SubchainRegistry {
    pub fn new(chip: &ChipModel, max_len: usize, mode: SearchMode) -> Result<Self> {
        Ok(SubchainRegistry {
            current: RwLock::new(Arc::new(SubchainLibrary::build(chip, max_len, mode)?)),
            max_len,
            mode,
        })
    }

    pub fn snapshot(&self) -> Arc<SubchainLibrary> {
        Arc::clone(&self.current.read().expect("registry lock"))
    }

    /// Rebuilds from new calibration data and swaps it in.
    pub fn refresh(&self, chip: &ChipModel) -> Result<Arc<SubchainLibrary>> {
        let fresh = Arc::new(SubchainLibrary::build(chip, self.max_len, self.mode)?);
        *self.current.write().expect("registry lock") = Arc::clone(&fresh);
        Ok(fresh)
    }
}
