use std::fmt::Write as _;

use serde::Serialize;

use super::Counts;
use crate::error::{Error, Result};
use crate::fmt::g17;
use crate::problem::{Sense, WeightGraph};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedRow {
    pub bitstring: String,
    pub count: u64,
    /// `C(z)` without the constant offset.
    pub energy: f64,
    /// Value of the original objective: offset added and, for maximization
    /// problems, the sign restored.
    pub objective: f64,
    pub solution: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedSolutions {
    /// Ascending energy, then descending count, then bitstring.
    pub rows: Vec<RankedRow>,
}

fn spins(bits: &str) -> Result<Vec<i8>> {
    bits.chars()
        .enumerate()
        .map(|(i, c)| match c {
            '0' => Ok(1),
            '1' => Ok(-1),
            _ => Err(Error::parse(
                format!("bitstring `{bits}` position {i}"),
                "expected 0 or 1",
            )),
        })
        .collect()
}

/// Scores every sampled bitstring against `g` and flags the best `top` rows.
pub fn process_results(counts: &Counts, g: &WeightGraph, top: usize) -> Result<RankedSolutions> {
    let mut rows = counts
        .iter()
        .map(|(bits, &count)| {
            let energy = g.energy(&spins(bits)?)?;
            Ok(RankedRow {
                bitstring: bits.clone(),
                count,
                energy,
                objective: energy + g.offset(),
                solution: false,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    // counts iterate in bitstring order, so a stable sort leaves that as the last key
    rows.sort_by(|a, b| a.energy.total_cmp(&b.energy).then(b.count.cmp(&a.count)));
    for row in rows.iter_mut().take(top) {
        row.solution = true;
    }
    Ok(RankedSolutions { rows })
}

/// QUBO variables for a logical bitstring. Spins are `s = 2x − 1` on the
/// QUBO side and `z = 1 − 2·bit` on the measurement side, so `x = 1 − bit`.
pub fn qubo_assignment(bits: &str) -> Result<Vec<bool>> {
    Ok(spins(bits)?.into_iter().map(|z| z == 1).collect())
}

impl RankedSolutions {
    /// Flips objective signs for a maximization problem.
    pub fn with_sense(mut self, sense: Sense) -> Self {
        if sense == Sense::Maximize {
            for row in &mut self.rows {
                row.objective = -row.objective;
            }
        }
        self
    }

    pub fn solutions(&self) -> impl Iterator<Item = &RankedRow> {
        self.rows.iter().filter(|r| r.solution)
    }

    pub fn total_shots(&self) -> u64 {
        self.rows.iter().map(|r| r.count).sum()
    }

    /// Fixed-width table, one row per bitstring.
    pub fn to_table(&self) -> String {
        let width = self.rows.first().map_or(9, |r| r.bitstring.len().max(9));
        let mut out = format!(
            "{:<4} {:<width$} {:>8} {:>12} {:>12}  solution\n",
            "rank", "bitstring", "count", "energy", "objective"
        );
        for (i, r) in self.rows.iter().enumerate() {
            let _ = writeln!(
                out,
                "{:<4} {:<width$} {:>8} {:>12.6} {:>12.6}  {}",
                i + 1,
                r.bitstring,
                r.count,
                r.energy,
                r.objective,
                if r.solution { "*" } else { "" }
            );
        }
        out
    }

    /// `bitstring,count,probability,energy` in bitstring order.
    pub fn histogram_csv(&self) -> String {
        let total = self.total_shots().max(1) as f64;
        let mut rows: Vec<&RankedRow> = self.rows.iter().collect();
        rows.sort_by(|a, b| a.bitstring.cmp(&b.bitstring));
        let mut out = String::from("bitstring,count,probability,energy\n");
        for r in rows {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                r.bitstring,
                r.count,
                g17(r.count as f64 / total),
                g17(r.energy)
            );
        }
        out
    }
}

/// Node fill colors, reused cyclically.
pub const PALETTE: [&str; 12] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
    "#9c755f", "#bab0ac", "#17becf", "#bcbd22",
];

/// Undirected DOT graph of `g` with node `v` filled by `PALETTE[class[v] % 12]`.
/// A partition bitstring gives two colors; a coloring gives one per color index.
pub fn colored_dot(g: &WeightGraph, class: &[usize]) -> Result<String> {
    if class.len() != g.num_nodes() {
        return Err(Error::LengthMismatch {
            expected: g.num_nodes(),
            actual: class.len(),
        });
    }
    let mut out = String::from("graph solution {\n  node [style=filled, shape=circle];\n");
    for (v, &c) in class.iter().enumerate() {
        let _ = writeln!(out, "  {v} [fillcolor=\"{}\"];", PALETTE[c % PALETTE.len()]);
    }
    for e in g.edges() {
        let cut = class[e.u] != class[e.v];
        let _ = writeln!(
            out,
            "  {} -- {} [label=\"{}\"{}];",
            e.u,
            e.v,
            g17(e.w),
            if cut { ", style=dashed" } else { "" }
        );
    }
    out.push_str("}\n");
    Ok(out)
}
