//! Turns problem flags into a weight graph plus what is needed to report on it.

use std::path::PathBuf;

use chainqaoa::problem::builders::{self, SimpleGraph};
use chainqaoa::problem::{weight_graph_from_qubo, QuboMatrix, Sense, WeightGraph};
use chainqaoa::tasks::{colored_dot, qubo_assignment};
use chainqaoa::{Error, Result};
use clap::{Args, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProblemKind {
    /// The graph file already holds Ising weights.
    Ising,
    Maxcut,
    Partition,
    Coloring,
    Packing,
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    /// Weight-graph JSON file.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "ising")]
    pub problem: ProblemKind,
    /// Numbers to partition, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub numbers: Vec<u64>,
    /// Colors available for graph coloring.
    #[arg(long)]
    pub colors: Option<usize>,
    /// Universe size for set packing.
    #[arg(long)]
    pub universe: Option<usize>,
    /// Sets for packing, e.g. "0,1;1,2;3".
    #[arg(long)]
    pub sets: Option<String>,
    /// Overlap penalty for set packing.
    #[arg(long, default_value_t = 2.0)]
    pub penalty: f64,
}

pub struct Problem {
    pub kind: ProblemKind,
    pub graph: WeightGraph,
    pub qubo: Option<QuboMatrix>,
    /// The user's graph, for drawing.
    pub source: Option<WeightGraph>,
    colors: usize,
}

impl ProblemArgs {
    pub fn is_given(&self) -> bool {
        self.graph.is_some() || self.problem != ProblemKind::Ising
    }

    fn source(&self) -> Result<WeightGraph> {
        match &self.graph {
            Some(path) => WeightGraph::read(path),
            None => Err(Error::Config(format!(
                "--problem {:?} needs --graph",
                self.problem
            ))),
        }
    }

    pub fn build(&self) -> Result<Problem> {
        let (qubo, source, colors) = match self.problem {
            ProblemKind::Ising => {
                let graph = self.source()?;
                return Ok(Problem {
                    kind: self.problem,
                    source: Some(graph.clone()),
                    graph,
                    qubo: None,
                    colors: 0,
                });
            }
            ProblemKind::Maxcut => {
                let g = self.source()?;
                (builders::maxcut(&SimpleGraph::from(&g))?, Some(g), 0)
            }
            ProblemKind::Coloring => {
                let g = self.source()?;
                let k = self
                    .colors
                    .ok_or_else(|| Error::Config("coloring needs --colors".into()))?;
                (
                    builders::graph_coloring(&SimpleGraph::from(&g), k)?,
                    Some(g),
                    k,
                )
            }
            ProblemKind::Partition => (builders::number_partition(&self.numbers)?, None, 0),
            ProblemKind::Packing => {
                let universe = self
                    .universe
                    .ok_or_else(|| Error::Config("set packing needs --universe".into()))?;
                let sets = parse_sets(self.sets.as_deref().unwrap_or(""))?;
                (
                    builders::set_packing(universe, &sets, self.penalty)?,
                    None,
                    0,
                )
            }
        };
        Ok(Problem {
            kind: self.problem,
            graph: weight_graph_from_qubo(&qubo),
            qubo: Some(qubo),
            source,
            colors,
        })
    }
}

fn parse_sets(text: &str) -> Result<Vec<Vec<usize>>> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .enumerate()
        .map(|(k, set)| {
            set.split(',')
                .map(|x| {
                    x.trim().parse().map_err(|_| {
                        Error::Config(format!("set {k}: `{x}` is not an element index"))
                    })
                })
                .collect()
        })
        .collect()
}

impl Problem {
    pub fn sense(&self) -> Sense {
        self.qubo
            .as_ref()
            .map_or(Sense::Minimize, QuboMatrix::sense)
    }

    /// DOT drawing of a solution bitstring on the user's graph, if there is one.
    pub fn dot(&self, bits: &str) -> Result<Option<String>> {
        let Some(source) = &self.source else {
            return Ok(None);
        };
        let x = qubo_assignment(bits)?;
        let class: Vec<usize> = match self.kind {
            ProblemKind::Coloring => (0..source.num_nodes())
                .map(|v| {
                    (0..self.colors)
                        .find(|&c| x[builders::coloring_index(v, c, self.colors)])
                        .unwrap_or(self.colors)
                })
                .collect(),
            _ => x.iter().map(|&b| usize::from(b)).collect(),
        };
        colored_dot(source, &class).map(Some)
    }
}
