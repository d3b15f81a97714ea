//! QUBO encodings of the bundled applications.
//!
//! All of them minimize. Maximization problems (max cut, set packing) are
//! negated here and carry [`Sense::Maximize`] so reports can flip the sign back.

use std::collections::BTreeSet;

use super::graph::WeightGraph;
use super::qubo::{QuboMatrix, Sense};
use crate::error::{Error, Result};

/// Undirected simple graph used as application input. Unweighted edges have `w = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize, f64)>,
}

impl SimpleGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &(u, v, _) in &edges {
            if u >= n || v >= n {
                return Err(Error::Model(format!("edge ({u}, {v}) outside 0..{n}")));
            }
            if u == v {
                return Err(Error::Model(format!("self-loop on node {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::Model(format!("duplicate edge ({u}, {v})")));
            }
        }
        Ok(SimpleGraph { n, edges })
    }

    pub fn unweighted(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::new(n, pairs.iter().map(|&(u, v)| (u, v, 1.0)).collect())
    }
}

impl From<&WeightGraph> for SimpleGraph {
    fn from(g: &WeightGraph) -> Self {
        SimpleGraph {
            n: g.num_nodes(),
            edges: g.edges().iter().map(|e| (e.u, e.v, e.w)).collect(),
        }
    }
}

/// `min Σ_{(u,v)∈E} w_uv (2 x_u x_v − x_u − x_v)`, i.e. minus the cut weight.
pub fn maxcut(graph: &SimpleGraph) -> Result<QuboMatrix> {
    if graph.edges.is_empty() {
        return Err(Error::Model("max cut needs at least one edge".into()));
    }
    let mut q = QuboMatrix::zeros(graph.n)?;
    for &(u, v, w) in &graph.edges {
        q.add_quadratic(u, v, 2.0 * w);
        q.add_linear(u, -w);
        q.add_linear(v, -w);
    }
    q.set_sense(Sense::Maximize);
    Ok(q)
}

/// `min (Σ_i n_i s_i)²` with `s_i = 2x_i − 1`; the minimum is the squared
/// residue of the best two-way partition.
pub fn number_partition(numbers: &[u64]) -> Result<QuboMatrix> {
    if numbers.is_empty() {
        return Err(Error::Model(
            "number partitioning needs at least one number".into(),
        ));
    }
    if numbers.contains(&0) {
        return Err(Error::Model("numbers must be positive".into()));
    }
    let a: Vec<f64> = numbers.iter().map(|&v| v as f64).collect();
    let total: f64 = a.iter().sum();
    let mut q = QuboMatrix::zeros(a.len())?;
    // (2Σ a_i x_i − S)² = 4(Σ a_i x_i)² − 4S Σ a_i x_i + S²
    for i in 0..a.len() {
        q.add_linear(i, 4.0 * a[i] * a[i] - 4.0 * total * a[i]);
        for j in (i + 1)..a.len() {
            q.add_quadratic(i, j, 8.0 * a[i] * a[j]);
        }
    }
    q.add_offset(total * total);
    Ok(q)
}

/// Index of variable "vertex `v` has color `c`" in [`graph_coloring`]'s layout.
pub fn coloring_index(v: usize, c: usize, colors: usize) -> usize {
    v * colors + c
}

/// One-hot penalty `Σ_v (1 − Σ_c x_{v,c})² + Σ_{(u,v)∈E} Σ_c x_{u,c} x_{v,c}`
/// over `n·k` variables laid out as `v·k + c`. Minimum 0 iff `k`-colorable.
pub fn graph_coloring(graph: &SimpleGraph, colors: usize) -> Result<QuboMatrix> {
    if colors == 0 {
        return Err(Error::Model("color count must be at least 1".into()));
    }
    let mut q = QuboMatrix::zeros(graph.n * colors)?;
    for v in 0..graph.n {
        // (1 − Σx)² = 1 − Σx + 2 Σ_{c<c'} x_c x_c'   (x² = x)
        q.add_offset(1.0);
        for c in 0..colors {
            q.add_linear(coloring_index(v, c, colors), -1.0);
            for c2 in (c + 1)..colors {
                q.add_quadratic(
                    coloring_index(v, c, colors),
                    coloring_index(v, c2, colors),
                    2.0,
                );
            }
        }
    }
    for &(u, v, _) in &graph.edges {
        for c in 0..colors {
            q.add_quadratic(
                coloring_index(u, c, colors),
                coloring_index(v, c, colors),
                1.0,
            );
        }
    }
    Ok(q)
}

/// `min −Σ_i x_i + P Σ_{i<j, S_i∩S_j≠∅} x_i x_j`. Requires `P > 1` so that
/// dropping one of two overlapping sets always pays.
pub fn set_packing(universe_size: usize, sets: &[Vec<usize>], penalty: f64) -> Result<QuboMatrix> {
    if penalty.is_nan() || penalty <= 1.0 {
        return Err(Error::Config(format!(
            "set packing penalty must exceed 1, got {penalty}"
        )));
    }
    if sets.is_empty() {
        return Err(Error::Model("set packing needs at least one set".into()));
    }
    let members: Vec<BTreeSet<usize>> = sets.iter().map(|s| s.iter().copied().collect()).collect();
    if let Some(bad) = members.iter().flatten().find(|&&e| e >= universe_size) {
        return Err(Error::Model(format!(
            "element {bad} outside universe 0..{universe_size}"
        )));
    }
    let mut q = QuboMatrix::zeros(sets.len())?;
    for i in 0..sets.len() {
        q.add_linear(i, -1.0);
        for j in (i + 1)..sets.len() {
            if !members[i].is_disjoint(&members[j]) {
                q.add_quadratic(i, j, penalty);
            }
        }
    }
    q.set_sense(Sense::Maximize);
    Ok(q)
}
