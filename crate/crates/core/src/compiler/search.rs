//! Heuristic search for the initial logical → position mapping.
//!
//! Logical qubits are placed in descending-degree order (ties by ascending
//! id). Each search node extends its parent by one placement; its cost is the
//! latest RZZ cycle among all edges between already-placed qubits, read from
//! the [`ExeRTable`]. After every level, at most `b_max` nodes are retained per
//! distinct cost value, first come first kept.

use super::template::ExeRTable;
use crate::error::{Error, Result};
use crate::problem::WeightGraph;

/// Logical qubit → chain position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mapping {
    positions: Vec<usize>,
}

impl Mapping {
    /// Fails unless `positions` is injective into `0..chain_len`.
    pub fn new(positions: Vec<usize>, chain_len: usize) -> Result<Self> {
        let mut used = vec![false; chain_len];
        for (l, &p) in positions.iter().enumerate() {
            if p >= chain_len || std::mem::replace(&mut used[p], true) {
                return Err(Error::Config(format!(
                    "logical qubit {l} maps to position {p}, which is out of range or taken"
                )));
            }
        }
        Ok(Mapping { positions })
    }

    pub fn identity(n: usize) -> Self {
        Mapping {
            positions: (0..n).collect(),
        }
    }

    pub fn position(&self, logical: usize) -> usize {
        self.positions[logical]
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Nodes kept per distinct cost value at each level.
    pub b_max: usize,
    /// Restrict the first placed qubit to the left half of the chain, which
    /// is equivalent under mirror symmetry.
    pub mirror_pruning: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            b_max: 5,
            mirror_pruning: false,
        }
    }
}

/// Latest RZZ cycle over all edges under `mapping` (0 for an edgeless graph).
pub fn mapping_cost(g: &WeightGraph, mapping: &Mapping, exer: &ExeRTable) -> usize {
    g.edges()
        .iter()
        .map(|e| exer.get(mapping.position(e.u), mapping.position(e.v)))
        .max()
        .unwrap_or(0)
}

/// Descending degree, ties by ascending node id.
pub fn placement_order(g: &WeightGraph) -> Vec<usize> {
    let deg = g.degrees();
    let mut order: Vec<usize> = (0..g.num_nodes()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(deg[v]), v));
    order
}

const UNPLACED: u32 = u32::MAX;

struct Node {
    /// Indexed by logical qubit.
    positions: Vec<u32>,
    cost: usize,
}

/// Returns the best mapping found and its predicted last RZZ cycle.
pub fn search_initial_mapping(
    g: &WeightGraph,
    exer: &ExeRTable,
    options: SearchOptions,
) -> Result<(Mapping, usize)> {
    let n = exer.n();
    let m = g.num_nodes();
    if m > n {
        return Err(Error::Capacity(format!(
            "graph has {m} nodes but the chain has only {n} positions"
        )));
    }
    if options.b_max == 0 {
        return Err(Error::Config("b_max must be at least 1".into()));
    }
    let order = placement_order(g);
    let adj = g.adjacency();

    let first_positions = if options.mirror_pruning {
        n.div_ceil(2)
    } else {
        n
    };
    let mut level: Vec<Node> = (0..first_positions)
        .map(|p| {
            let mut positions = vec![UNPLACED; m];
            positions[order[0]] = p as u32;
            Node { positions, cost: 0 }
        })
        .collect();

    let mut per_cost = Vec::new();
    let mut used = vec![false; n];
    for &q in &order[1..] {
        let placed_neighbors: Vec<usize> = adj[q]
            .iter()
            .copied()
            .filter(|&v| level[0].positions[v] != UNPLACED)
            .collect();
        per_cost.clear();
        let mut survivors: Vec<(usize, usize, usize)> = Vec::new();
        for (parent_idx, parent) in level.iter().enumerate() {
            used.iter_mut().for_each(|u| *u = false);
            for &p in &parent.positions {
                if p != UNPLACED {
                    used[p as usize] = true;
                }
            }
            for p in (0..n).filter(|&p| !used[p]) {
                let cost = placed_neighbors
                    .iter()
                    .map(|&v| exer.get(p, parent.positions[v] as usize))
                    .fold(parent.cost, usize::max);
                if per_cost.len() <= cost {
                    per_cost.resize(cost + 1, 0);
                }
                if per_cost[cost] < options.b_max {
                    per_cost[cost] += 1;
                    survivors.push((parent_idx, p, cost));
                }
            }
        }
        level = survivors
            .into_iter()
            .map(|(parent_idx, p, cost)| {
                let mut positions = level[parent_idx].positions.clone();
                positions[q] = p as u32;
                Node { positions, cost }
            })
            .collect();
    }

    let best = level
        .iter()
        .enumerate()
        .min_by_key(|(i, node)| (node.cost, *i))
        .map(|(_, node)| node)
        .expect("the first level is never empty");
    let mapping = Mapping {
        positions: best.positions.iter().map(|&p| p as usize).collect(),
    };
    Ok((mapping, best.cost))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for rest in all_permutations(n - 1) {
            for k in 0..=rest.len() {
                let mut p = rest.clone();
                p.insert(k, n - 1);
                out.push(p);
            }
        }
        out
    }

    #[test]
    fn path_puts_center_in_middle() {
        let g = WeightGraph::unweighted(3, &[(0, 1), (1, 2)]).unwrap();
        let exer = ExeRTable::new(3).unwrap();
        let (mapping, cost) = search_initial_mapping(&g, &exer, SearchOptions::default()).unwrap();
        assert_eq!(mapping.position(1), 1);
        assert_eq!(cost, 2);
        let best = all_permutations(3)
            .into_iter()
            .map(|p| mapping_cost(&g, &Mapping::new(p, 3).unwrap(), &exer))
            .min()
            .unwrap();
        assert_eq!(best, 2);
    }

    #[test]
    fn complete_graph_cost_is_mapping_independent() {
        for n in 2..=6 {
            let pairs: Vec<_> = (0..n)
                .flat_map(|a| ((a + 1)..n).map(move |b| (a, b)))
                .collect();
            let g = WeightGraph::unweighted(n, &pairs).unwrap();
            let exer = ExeRTable::new(n).unwrap();
            let costs: std::collections::BTreeSet<usize> = all_permutations(n)
                .into_iter()
                .map(|p| mapping_cost(&g, &Mapping::new(p, n).unwrap(), &exer))
                .collect();
            assert_eq!(costs.len(), 1, "n = {n}");
            let (_, cost) = search_initial_mapping(&g, &exer, SearchOptions::default()).unwrap();
            assert_eq!(Some(&cost), costs.iter().next());
        }
    }

    #[test]
    fn single_edge_is_identity() {
        let g = WeightGraph::unweighted(2, &[(0, 1)]).unwrap();
        let exer = ExeRTable::new(2).unwrap();
        let (mapping, cost) = search_initial_mapping(&g, &exer, SearchOptions::default()).unwrap();
        assert_eq!(mapping, Mapping::identity(2));
        assert_eq!(cost, 1);
    }

    #[test]
    fn predicted_cost_matches_mapping_cost() {
        let g =
            WeightGraph::unweighted(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 4), (1, 3)])
                .unwrap();
        let exer = ExeRTable::new(6).unwrap();
        for b_max in 1..=6 {
            let options = SearchOptions {
                b_max,
                mirror_pruning: false,
            };
            let (mapping, cost) = search_initial_mapping(&g, &exer, options).unwrap();
            assert_eq!(cost, mapping_cost(&g, &mapping, &exer));
        }
    }

    #[test]
    fn smaller_graph_on_longer_chain() {
        let g = WeightGraph::unweighted(3, &[(0, 1), (0, 2)]).unwrap();
        let exer = ExeRTable::new(5).unwrap();
        let (mapping, cost) = search_initial_mapping(&g, &exer, SearchOptions::default()).unwrap();
        assert_eq!(mapping.len(), 3);
        assert_eq!(cost, mapping_cost(&g, &mapping, &exer));
        let big = WeightGraph::unweighted(6, &[(0, 1)]).unwrap();
        assert!(matches!(
            search_initial_mapping(&big, &exer, SearchOptions::default()),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn mapping_validation() {
        assert!(Mapping::new(vec![0, 0], 2).is_err());
        assert!(Mapping::new(vec![0, 2], 2).is_err());
        assert!(Mapping::new(vec![1, 0], 2).is_ok());
    }
}
