//! Weight graphs: the Ising Hamiltonian as a graph with node weights `h_i`
//! and edge weights `J_uv`, plus the JSON interchange format.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use super::ising::IsingModel;
use crate::error::{Error, Result};
use crate::fmt::g17;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// Node-weighted, edge-weighted undirected simple graph.
///
/// Nodes are `0..n`. Edges are stored with `u < v`, sorted by `(u, v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightGraph {
    node_weights: Vec<f64>,
    edges: Vec<Edge>,
    offset: f64,
}

impl WeightGraph {
    pub fn new(node_weights: Vec<f64>, edges: Vec<Edge>, offset: f64) -> Result<Self> {
        let n = node_weights.len();
        if n == 0 {
            return Err(Error::Model(
                "a weight graph needs at least one node".into(),
            ));
        }
        let mut canon = Vec::with_capacity(edges.len());
        for e in edges {
            if e.u == e.v {
                return Err(Error::Model(format!("self-loop on node {}", e.u)));
            }
            if e.u >= n || e.v >= n {
                return Err(Error::Model(format!(
                    "edge ({}, {}) references a node outside 0..{n}",
                    e.u, e.v
                )));
            }
            let (u, v) = if e.u < e.v { (e.u, e.v) } else { (e.v, e.u) };
            canon.push(Edge { u, v, w: e.w });
        }
        canon.sort_by_key(|e| (e.u, e.v));
        if let Some(d) = canon
            .windows(2)
            .find(|w| (w[0].u, w[0].v) == (w[1].u, w[1].v))
        {
            return Err(Error::Model(format!(
                "duplicate edge ({}, {})",
                d[0].u, d[0].v
            )));
        }
        Ok(WeightGraph {
            node_weights,
            edges: canon,
            offset,
        })
    }

    /// Unit-weight edges, zero node weights.
    pub fn unweighted(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let edges = pairs.iter().map(|&(u, v)| Edge { u, v, w: 1.0 }).collect();
        Self::new(vec![0.0; n], edges, 0.0)
    }

    /// Nodes carry `h_i`; an edge is present iff `J_ij ≠ 0`.
    pub fn from_ising(m: &IsingModel) -> Self {
        let edges = m
            .couplings
            .iter()
            .filter(|(_, &w)| w != 0.0)
            .map(|(&(u, v), &w)| Edge { u, v, w })
            .collect();
        WeightGraph::new(m.bias.clone(), edges, m.offset)
            .expect("Ising models have valid couplings")
    }

    pub fn num_nodes(&self) -> usize {
        self.node_weights.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn node_weights(&self) -> &[f64] {
        &self.node_weights
    }

    pub fn node_weight(&self, i: usize) -> f64 {
        self.node_weights[i]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn edge_weight(&self, u: usize, v: usize) -> Option<f64> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges
            .binary_search_by_key(&key, |e| (e.u, e.v))
            .ok()
            .map(|i| self.edges[i].w)
    }

    /// Sorted neighbor lists.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.num_nodes()];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.num_nodes()];
        for e in &self.edges {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        deg
    }

    /// `C(z) = Σ J_uv z_u z_v + Σ h_i z_i`, offset excluded.
    pub fn energy(&self, z: &[i8]) -> Result<f64> {
        if z.len() != self.num_nodes() {
            return Err(Error::LengthMismatch {
                expected: self.num_nodes(),
                actual: z.len(),
            });
        }
        Ok(self.energy_unchecked(z))
    }

    pub(crate) fn energy_unchecked(&self, z: &[i8]) -> f64 {
        let mut e: f64 = self
            .node_weights
            .iter()
            .zip(z)
            .map(|(h, &s)| h * f64::from(s))
            .sum();
        for edge in &self.edges {
            e += edge.w * f64::from(z[edge.u] * z[edge.v]);
        }
        e
    }

    /// Subgraph induced by `nodes` (renumbered in the given order), with
    /// all node weights kept and the offset dropped.
    pub fn induced(&self, nodes: &[usize]) -> WeightGraph {
        let mut index = vec![usize::MAX; self.num_nodes()];
        for (k, &v) in nodes.iter().enumerate() {
            index[v] = k;
        }
        let weights = nodes.iter().map(|&v| self.node_weights[v]).collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| index[e.u] != usize::MAX && index[e.v] != usize::MAX)
            .map(|e| Edge {
                u: index[e.u],
                v: index[e.v],
                w: e.w,
            })
            .collect();
        WeightGraph::new(weights, edges, 0.0).expect("induced subgraph of a valid graph")
    }

    /// Places `other` after `self`, node ids shifted by `self.num_nodes()`.
    pub fn disjoint_union(&self, other: &WeightGraph) -> WeightGraph {
        let shift = self.num_nodes();
        let mut weights = self.node_weights.clone();
        weights.extend_from_slice(&other.node_weights);
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|e| Edge {
            u: e.u + shift,
            v: e.v + shift,
            w: e.w,
        }));
        WeightGraph::new(weights, edges, self.offset + other.offset).expect("union of valid graphs")
    }

    /// Canonical JSON text: nodes by id, edges by `(u, v)`, 17 significant digits.
    pub fn to_json(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{{");
        let _ = writeln!(out, "  \"offset\": {},", g17(self.offset));
        let _ = write!(out, "  \"nodes\": [");
        for (i, w) in self.node_weights.iter().enumerate() {
            let sep = if i + 1 == self.node_weights.len() {
                ""
            } else {
                ","
            };
            let _ = write!(out, "\n    {{\"id\": {i}, \"w\": {}}}{sep}", g17(*w));
        }
        let _ = writeln!(out, "\n  ],");
        if self.edges.is_empty() {
            let _ = writeln!(out, "  \"edges\": []");
        } else {
            let _ = write!(out, "  \"edges\": [");
            for (i, e) in self.edges.iter().enumerate() {
                let sep = if i + 1 == self.edges.len() { "" } else { "," };
                let _ = write!(
                    out,
                    "\n    {{\"u\": {}, \"v\": {}, \"w\": {}}}{sep}",
                    e.u,
                    e.v,
                    g17(e.w)
                );
            }
            let _ = writeln!(out, "\n  ]");
        }
        out.push_str("}\n");
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: GraphDoc = serde_json::from_str(text).map_err(|e| {
            Error::parse(
                format!("line {} column {}", e.line(), e.column()),
                e.to_string(),
            )
        })?;
        doc.into_graph()
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    offset: f64,
    nodes: Vec<NodeDoc>,
    edges: Vec<EdgeDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    id: usize,
    w: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    u: usize,
    v: usize,
    w: f64,
}

impl GraphDoc {
    fn into_graph(self) -> Result<WeightGraph> {
        if self.nodes.is_empty() {
            return Err(Error::parse("nodes", "node list is empty"));
        }
        let n = self.nodes.len();
        let mut weights = vec![0.0; n];
        let mut seen = BTreeSet::new();
        for (k, node) in self.nodes.iter().enumerate() {
            if node.id >= n {
                return Err(Error::parse(
                    format!("nodes[{k}].id"),
                    format!("id {} outside 0..{n}", node.id),
                ));
            }
            if !seen.insert(node.id) {
                return Err(Error::parse(
                    format!("nodes[{k}].id"),
                    format!("duplicate id {}", node.id),
                ));
            }
            weights[node.id] = node.w;
        }
        let mut pairs = BTreeSet::new();
        let mut edges = Vec::with_capacity(self.edges.len());
        for (k, e) in self.edges.iter().enumerate() {
            let at = format!("edges[{k}]");
            if e.u >= n || e.v >= n {
                let missing = if e.u >= n { e.u } else { e.v };
                return Err(Error::parse(
                    at,
                    format!("endpoint {missing} is not a node"),
                ));
            }
            if e.u == e.v {
                return Err(Error::parse(at, "self-loop"));
            }
            if !pairs.insert((e.u.min(e.v), e.u.max(e.v))) {
                return Err(Error::parse(at, "duplicate edge"));
            }
            edges.push(Edge {
                u: e.u,
                v: e.v,
                w: e.w,
            });
        }
        WeightGraph::new(weights, edges, self.offset)
    }
}
