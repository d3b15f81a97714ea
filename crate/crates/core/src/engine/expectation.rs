//! `E_p` evaluation: directly on the whole graph, or as a sum of per-term
//! expectations, each computed on the term's `p`-hop neighborhood.

use std::collections::VecDeque;

use rayon::prelude::*;

use super::ansatz::{cost_diagonal, qaoa_state, QaoaParams};
use crate::error::{Error, Result};
use crate::problem::WeightGraph;
use crate::sim::MAX_QUBITS;

/// One Hamiltonian term, in original node ids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Term {
    Node { i: usize, h: f64 },
    Edge { u: usize, v: usize, j: f64 },
}

impl Term {
    pub fn weight(&self) -> f64 {
        match *self {
            Term::Node { h, .. } => h,
            Term::Edge { j, .. } => j,
        }
    }

    pub fn support(&self) -> Vec<usize> {
        match *self {
            Term::Node { i, .. } => vec![i],
            Term::Edge { u, v, .. } => vec![u, v],
        }
    }
}

impl std::fmt::Display for Term {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Term::Node { i, .. } => write!(f, "Z{i}"),
            Term::Edge { u, v, .. } => write!(f, "Z{u}Z{v}"),
        }
    }
}

/// A term together with the induced subgraph it has to be simulated on.
#[derive(Debug, Clone, PartialEq)]
pub struct TermSubproblem {
    pub term: Term,
    pub subgraph: WeightGraph,
    /// `nodes[k]` is the original id of subgraph node `k`; ascending.
    pub nodes: Vec<usize>,
}

impl TermSubproblem {
    fn local(&self, original: usize) -> usize {
        self.nodes
            .binary_search(&original)
            .expect("term support lies in its subgraph")
    }

    /// `⟨Z_i⟩` or `⟨Z_u Z_v⟩` on the subgraph's QAOA state, unweighted.
    pub fn term_expectation(&self, params: &QaoaParams) -> Result<f64> {
        let diag = cost_diagonal(&self.subgraph);
        let psi = qaoa_state(&self.subgraph, &diag, params)?;
        let mask = self
            .term
            .support()
            .iter()
            .fold(0usize, |m, &v| m | 1 << self.local(v));
        Ok(psi
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(idx, a)| {
                let sign = if (idx & mask).count_ones() % 2 == 0 {
                    1.0
                } else {
                    -1.0
                };
                sign * a.norm_sqr()
            })
            .sum())
    }
}

/// Nodes within `radius` hops of `sources`, ascending.
fn neighborhood(adj: &[Vec<usize>], sources: &[usize], radius: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; adj.len()];
    let mut queue = VecDeque::new();
    for &s in sources {
        dist[s] = 0;
        queue.push_back(s);
    }
    while let Some(v) = queue.pop_front() {
        if dist[v] == radius {
            continue;
        }
        for &w in &adj[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    (0..adj.len()).filter(|&v| dist[v] != usize::MAX).collect()
}

/// One subproblem per nonzero node weight (in node order) followed by one per
/// edge (in `(u, v)` order). Each subgraph is the induced `p`-hop closed
/// neighborhood of the term's support, which contains the term's whole light cone.
pub fn decompose(g: &WeightGraph, p: usize) -> Vec<TermSubproblem> {
    let adj = g.adjacency();
    let nodes = g
        .node_weights()
        .iter()
        .enumerate()
        .filter(|(_, &h)| h != 0.0)
        .map(|(i, &h)| Term::Node { i, h });
    let edges = g.edges().iter().map(|e| Term::Edge {
        u: e.u,
        v: e.v,
        j: e.w,
    });
    nodes
        .chain(edges)
        .map(|term| {
            let nodes = neighborhood(&adj, &term.support(), p);
            TermSubproblem {
                term,
                subgraph: g.induced(&nodes),
                nodes,
            }
        })
        .collect()
}

/// `⟨γ,β|H_C|γ,β⟩` from the full statevector (offset excluded).
pub fn expectation_full(g: &WeightGraph, params: &QaoaParams) -> Result<f64> {
    let diag = cost_diagonal(g);
    let psi = qaoa_state(g, &diag, params)?;
    Ok(psi
        .amplitudes()
        .iter()
        .zip(&diag)
        .map(|(a, c)| a.norm_sqr() * c)
        .sum())
}

/// `Σ_terms weight · ⟨term⟩`, subproblems evaluated in parallel and summed in
/// index order so the total is bitwise reproducible.
pub fn expectation_decomposed(g: &WeightGraph, params: &QaoaParams) -> Result<f64> {
    let subproblems = decompose(g, params.p());
    expectation_of(&subproblems, params)
}

/// Sums precomputed subproblems; lets optimizers decompose once.
pub fn expectation_of(subproblems: &[TermSubproblem], params: &QaoaParams) -> Result<f64> {
    if let Some(big) = subproblems
        .iter()
        .find(|s| s.subgraph.num_nodes() > MAX_QUBITS)
    {
        return Err(Error::Capacity(format!(
            "term {} needs a {}-qubit subgraph, limit is {MAX_QUBITS}",
            big.term,
            big.subgraph.num_nodes()
        )));
    }
    let parts: Vec<f64> = subproblems
        .par_iter()
        .map(|s| s.term_expectation(params).map(|e| s.term.weight() * e))
        .collect::<Result<_>>()?;
    Ok(parts.iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn ring(n: usize) -> WeightGraph {
        let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        WeightGraph::unweighted(n, &pairs).unwrap()
    }

    #[test]
    fn path_edge_sees_whole_path() {
        let g = WeightGraph::unweighted(3, &[(0, 1), (1, 2)]).unwrap();
        let subs = decompose(&g, 1);
        assert_eq!(subs.len(), 2);
        assert_eq!(subs[0].term, Term::Edge { u: 0, v: 1, j: 1.0 });
        assert_eq!(subs[0].nodes, vec![0, 1, 2]);
    }

    #[test]
    fn edgeless_graph_gives_single_vertices() {
        let g = WeightGraph::new(vec![1.0, 0.0, -2.0], vec![], 0.0).unwrap();
        let subs = decompose(&g, 3);
        assert_eq!(subs.len(), 2);
        assert!(subs.iter().all(|s| s.subgraph.num_nodes() == 1));
        assert_eq!(subs[1].nodes, vec![2]);
    }

    #[test]
    fn ring_of_six_edges_see_four_node_paths() {
        let subs = decompose(&ring(6), 1);
        assert_eq!(subs.len(), 6);
        for s in &subs {
            assert_eq!(s.subgraph.num_nodes(), 4);
            assert_eq!(s.subgraph.num_edges(), 3);
            let deg = s.subgraph.degrees();
            assert_eq!(deg.iter().filter(|&&d| d == 1).count(), 2);
        }
    }

    #[test]
    fn k2_single_subproblem_matches_full() {
        let g = WeightGraph::unweighted(2, &[(0, 1)]).unwrap();
        let params = QaoaParams::new(vec![0.37], vec![1.1]).unwrap();
        assert_eq!(decompose(&g, 1).len(), 1);
        let full = expectation_full(&g, &params).unwrap();
        let dec = expectation_decomposed(&g, &params).unwrap();
        assert!((full - dec).abs() < 1e-12);
    }

    #[test]
    fn single_edge_closed_form() {
        // Independent closed form for one edge with h = 0: ⟨ZZ⟩ = sin(4β)·sin(2γJ).
        for &(gamma, beta, j) in &[(PI / 8.0, PI / 8.0, 1.0), (0.3, 0.2, 1.0), (1.1, 0.7, 0.5)] {
            let g = WeightGraph::new(
                vec![0.0, 0.0],
                vec![crate::problem::Edge { u: 0, v: 1, w: j }],
                0.0,
            )
            .unwrap();
            let params = QaoaParams::new(vec![gamma], vec![beta]).unwrap();
            let e = expectation_full(&g, &params).unwrap();
            let want = j * (4.0 * beta).sin() * (2.0 * gamma * j).sin();
            assert!((e - want).abs() < 1e-12, "{e} vs {want}");
        }
    }

    #[test]
    fn zero_angles_give_zero_without_bias() {
        let g = ring(5);
        assert!(expectation_full(&g, &QaoaParams::zeros(1)).unwrap().abs() < 1e-12);
        let beta_zero = QaoaParams::new(vec![0.9], vec![0.0]).unwrap();
        assert!(expectation_full(&g, &beta_zero).unwrap().abs() < 1e-12);
    }

    #[test]
    fn disjoint_union_is_additive() {
        let a = ring(4);
        let b = WeightGraph::new(
            vec![0.5, -0.25, 0.0],
            vec![crate::problem::Edge { u: 0, v: 2, w: 2.0 }],
            0.0,
        )
        .unwrap();
        let params = QaoaParams::new(vec![0.3, 0.8], vec![0.5, 0.1]).unwrap();
        let sum = expectation_full(&a, &params).unwrap() + expectation_full(&b, &params).unwrap();
        let union = a.disjoint_union(&b);
        assert!((expectation_decomposed(&union, &params).unwrap() - sum).abs() < 1e-12);
    }
}
