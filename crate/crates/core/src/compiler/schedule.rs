//! Placing the QAOA gates onto the template for a chosen initial mapping.

use super::search::Mapping;
use super::template::{LayerKind, Template};
use crate::circuit::Gate;
use crate::engine::QaoaParams;
use crate::error::{Error, Result};
use crate::problem::WeightGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerRole {
    /// Initial Hadamards.
    Prepare,
    /// Node-bias RZ gates at the start of cost block `block` (1-based).
    Bias { block: usize },
    /// Template cycle `cycle` (1-based, forward numbering) of cost block `block`.
    Cost {
        block: usize,
        cycle: usize,
        kind: LayerKind,
    },
    /// RX layer closing block `block`.
    Mixer { block: usize },
}

/// Gates on chain positions; RZZ and SWAP are still present.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduledLayer {
    pub role: LayerRole,
    pub gates: Vec<Gate>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScheduledCircuit {
    /// Chain positions in use.
    pub n: usize,
    pub layers: Vec<ScheduledLayer>,
    pub initial: Mapping,
    /// Logical qubit → position after the last layer.
    pub final_layout: Vec<usize>,
    /// Template cycles kept per cost block (up to and including the last RZZ).
    pub cost_cycles: usize,
}

impl ScheduledCircuit {
    /// Template cycles summed over all cost blocks.
    pub fn cost_depth(&self) -> usize {
        self.layers
            .iter()
            .filter(|l| matches!(l.role, LayerRole::Cost { .. }))
            .count()
    }

    /// Last forward cycle of the first cost block that holds an RZZ (0 if none).
    pub fn last_rzz_cycle(&self) -> usize {
        self.layers
            .iter()
            .filter_map(|l| match l.role {
                LayerRole::Cost {
                    block: 1, cycle, ..
                } if l.gates.iter().any(|g| matches!(g, Gate::Rzz(..))) => Some(cycle),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.layers.iter().flat_map(|l| &l.gates)
    }
}

/// Template kind, 1-based cycle, and `(a, b, Some(J))` for RZZ or `(a, b, None)` for SWAP.
type CostCycle = (LayerKind, usize, Vec<(usize, usize, Option<f64>)>);

/// Builds the layered circuit: Hadamards, then for each block `k` the bias RZ
/// layer, the template cycles, and an RX layer. Odd blocks run the template
/// forward, truncated after the last cycle holding an RZZ; even blocks replay
/// the odd block's cost cycles in reverse with their own γ, which undoes the
/// chain permutation.
pub fn schedule(
    g: &WeightGraph,
    mapping: &Mapping,
    template: Option<&Template>,
    params: &QaoaParams,
) -> Result<ScheduledCircuit> {
    let m = g.num_nodes();
    if mapping.len() != m {
        return Err(Error::Config(format!(
            "mapping covers {} qubits, graph has {m}",
            mapping.len()
        )));
    }
    let n = match template {
        Some(t) => t.n(),
        None if g.num_edges() == 0 => mapping.positions().iter().max().map_or(0, |&p| p + 1),
        None => return Err(Error::Config("a graph with edges needs a template".into())),
    };
    Mapping::new(mapping.positions().to_vec(), n)?;

    // Forward cost cycles with unit γ: (kind, cycle, [(gate, J or 0 for SWAP)]).
    let mut occupant: Vec<Option<usize>> = vec![None; n];
    for (l, &p) in mapping.positions().iter().enumerate() {
        occupant[p] = Some(l);
    }
    let mut forward: Vec<CostCycle> = Vec::new();
    let mut last_rzz = 0;
    if let Some(t) = template {
        for (c, &kind) in t.layers().iter().enumerate() {
            let mut ops = Vec::new();
            for (a, b) in kind.pairs(n) {
                match (occupant[a], occupant[b]) {
                    (Some(u), Some(v)) if kind.is_rzz() => {
                        if let Some(j) = g.edge_weight(u, v) {
                            ops.push((a, b, Some(j)));
                        }
                    }
                    (None, None) => {}
                    _ if !kind.is_rzz() => {
                        occupant.swap(a, b);
                        ops.push((a, b, None));
                    }
                    _ => {}
                }
            }
            if kind.is_rzz() && !ops.is_empty() {
                last_rzz = c + 1;
            }
            forward.push((kind, c + 1, ops));
        }
    }
    forward.truncate(last_rzz);

    let mut after_odd = mapping.positions().to_vec();
    for (_, _, ops) in &forward {
        for &(a, b, j) in ops {
            if j.is_none() {
                for pos in after_odd.iter_mut() {
                    if *pos == a {
                        *pos = b;
                    } else if *pos == b {
                        *pos = a;
                    }
                }
            }
        }
    }

    let mut layers = vec![ScheduledLayer {
        role: LayerRole::Prepare,
        gates: mapping.positions().iter().map(|&p| Gate::H(p)).collect(),
    }];
    for (k, (&gamma, &beta)) in params.gamma.iter().zip(&params.beta).enumerate() {
        let block = k + 1;
        let odd = block % 2 == 1;
        let home = if odd {
            mapping.positions()
        } else {
            &after_odd[..]
        };
        let bias: Vec<Gate> = g
            .node_weights()
            .iter()
            .enumerate()
            .filter(|(_, &h)| h != 0.0)
            .map(|(l, &h)| Gate::Rz(home[l], 2.0 * gamma * h))
            .collect();
        if !bias.is_empty() {
            layers.push(ScheduledLayer {
                role: LayerRole::Bias { block },
                gates: bias,
            });
        }
        let to_layer = |(kind, cycle, ops): &CostCycle| ScheduledLayer {
            role: LayerRole::Cost {
                block,
                cycle: *cycle,
                kind: *kind,
            },
            gates: ops
                .iter()
                .map(|&(a, b, j)| match j {
                    Some(j) => Gate::Rzz(a, b, 2.0 * gamma * j),
                    None => Gate::Swap(a, b),
                })
                .collect(),
        };
        if odd {
            layers.extend(forward.iter().map(to_layer));
        } else {
            layers.extend(forward.iter().rev().map(to_layer));
        }
        let end = if odd {
            &after_odd[..]
        } else {
            mapping.positions()
        };
        layers.push(ScheduledLayer {
            role: LayerRole::Mixer { block },
            gates: end.iter().map(|&p| Gate::Rx(p, 2.0 * beta)).collect(),
        });
    }

    let final_layout = if params.p() % 2 == 1 {
        after_odd
    } else {
        mapping.positions().to_vec()
    };
    Ok(ScheduledCircuit {
        n,
        layers,
        initial: mapping.clone(),
        final_layout,
        cost_cycles: forward.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::template::ExeRTable;

    #[test]
    fn k2_depth_one() {
        let g = WeightGraph::unweighted(2, &[(0, 1)]).unwrap();
        let t = Template::new(2).unwrap();
        let params = QaoaParams::new(vec![0.3], vec![0.2]).unwrap();
        let s = schedule(&g, &Mapping::identity(2), Some(&t), &params).unwrap();
        let roles: Vec<_> = s.layers.iter().map(|l| l.role).collect();
        assert_eq!(
            roles,
            vec![
                LayerRole::Prepare,
                LayerRole::Cost {
                    block: 1,
                    cycle: 1,
                    kind: LayerKind::RzzEven
                },
                LayerRole::Mixer { block: 1 }
            ]
        );
        assert_eq!(s.layers[1].gates, vec![Gate::Rzz(0, 1, 0.6)]);
        assert_eq!(s.final_layout, vec![0, 1]);
    }

    #[test]
    fn rzz_lands_on_exer_cycle() {
        let g =
            WeightGraph::unweighted(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 4), (1, 3)])
                .unwrap();
        let t = Template::new(6).unwrap();
        let exer = ExeRTable::from_template(&t);
        let mapping = Mapping::new(vec![3, 0, 5, 1, 2, 4], 6).unwrap();
        let params = QaoaParams::new(vec![1.0], vec![0.5]).unwrap();
        let s = schedule(&g, &mapping, Some(&t), &params).unwrap();
        let mut seen = 0;
        for layer in &s.layers {
            if let LayerRole::Cost { cycle, .. } = layer.role {
                for gate in &layer.gates {
                    if let Gate::Rzz(..) = gate {
                        seen += 1;
                    }
                }
                let expected: usize = g
                    .edges()
                    .iter()
                    .filter(|e| exer.get(mapping.position(e.u), mapping.position(e.v)) == cycle)
                    .count();
                let got = layer
                    .gates
                    .iter()
                    .filter(|g| matches!(g, Gate::Rzz(..)))
                    .count();
                assert_eq!(got, expected, "cycle {cycle}");
            }
        }
        assert_eq!(seen, 7);
        assert!(s.cost_cycles <= 10);
    }

    #[test]
    fn even_depth_restores_layout() {
        let g = WeightGraph::unweighted(5, &[(0, 4), (1, 3), (2, 4), (0, 2)]).unwrap();
        let t = Template::new(5).unwrap();
        let mapping = Mapping::new(vec![4, 2, 0, 1, 3], 5).unwrap();
        let params = QaoaParams::new(vec![0.1, 0.2], vec![0.3, 0.4]).unwrap();
        let s = schedule(&g, &mapping, Some(&t), &params).unwrap();
        assert_eq!(s.final_layout, mapping.positions());
        let one = schedule(
            &g,
            &mapping,
            Some(&t),
            &QaoaParams::new(vec![0.1], vec![0.3]).unwrap(),
        )
        .unwrap();
        assert_ne!(one.final_layout, mapping.positions());
        assert_eq!(s.cost_depth(), 2 * one.cost_depth());
    }

    #[test]
    fn edgeless_graph_needs_no_template() {
        let g = WeightGraph::new(vec![0.5, -1.0], vec![], 0.0).unwrap();
        let params = QaoaParams::new(vec![0.3], vec![0.2]).unwrap();
        let s = schedule(&g, &Mapping::identity(2), None, &params).unwrap();
        assert_eq!(s.cost_depth(), 0);
        assert_eq!(s.layers[1].gates, vec![Gate::Rz(0, 0.3), Gate::Rz(1, -0.6)]);
    }
}
