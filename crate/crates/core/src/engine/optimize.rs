//! Classical outer loop: grid scan, Nelder–Mead refinement and Interp chaining.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::ansatz::{interp, QaoaParams};
use super::expectation::{decompose, expectation_full, expectation_of, TermSubproblem};
use crate::error::{Error, Result};
use crate::problem::WeightGraph;

/// Search box for one layer: γ ∈ [0, π), β ∈ [0, π/2).
pub const GAMMA_RANGE: f64 = PI;
pub const BETA_RANGE: f64 = PI / 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Uniform grid over the search box.
    Grid,
    /// Nelder–Mead from the initial point.
    Simplex,
    /// Grid (p = 1 only) followed by Nelder–Mead from the best cell.
    GridSimplex,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Init {
    Params(QaoaParams),
    /// Uniform draw from the search box.
    Random {
        seed: u64,
    },
    /// Solve depth 1, then lift with [`interp`] and re-optimize up to the target depth.
    InterpChain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evaluator {
    /// Light-cone decomposition.
    Decomposed,
    /// Whole-graph statevector.
    Full,
}

#[derive(Debug, Clone)]
pub struct OptimizerConfig {
    pub method: Method,
    pub init: Init,
    pub evaluator: Evaluator,
    /// Points per axis for the grid scan.
    pub grid_points: usize,
    pub max_evals: usize,
    /// Simplex stops when the spread of vertex energies falls below this.
    pub ftol: f64,
    /// ...and every vertex lies within this distance of the best one.
    pub xtol: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            method: Method::GridSimplex,
            init: Init::Params(QaoaParams::zeros(1)),
            evaluator: Evaluator::Decomposed,
            grid_points: 64,
            max_evals: 20_000,
            ftol: 1e-12,
            xtol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub eval: usize,
    pub params: QaoaParams,
    pub energy: f64,
}

#[derive(Debug, Clone)]
pub struct OptimizeResult {
    pub params: QaoaParams,
    /// Minimized `E_p`, offset excluded.
    pub energy: f64,
    pub trace: Vec<TraceRow>,
    /// False when the evaluation budget ran out first.
    pub converged: bool,
}

impl OptimizeResult {
    /// Trace as CSV: `eval,gamma_1..gamma_p,beta_1..beta_p,energy`.
    pub fn trace_csv(&self) -> String {
        use std::fmt::Write as _;
        let p = self.params.p();
        let mut out = String::from("eval");
        for k in 1..=p {
            let _ = write!(out, ",gamma_{k}");
        }
        for k in 1..=p {
            let _ = write!(out, ",beta_{k}");
        }
        out.push_str(",energy\n");
        for row in &self.trace {
            let _ = write!(out, "{}", row.eval);
            for v in row.params.to_vec() {
                let _ = write!(out, ",{}", crate::fmt::g17(v));
            }
            let _ = writeln!(out, ",{}", crate::fmt::g17(row.energy));
        }
        out
    }
}

/// Evaluation counter and trace around the energy function.
struct Objective<'a> {
    graph: &'a WeightGraph,
    evaluator: Evaluator,
    subproblems: Vec<TermSubproblem>,
    trace: Vec<TraceRow>,
    max_evals: usize,
}

impl<'a> Objective<'a> {
    fn new(graph: &'a WeightGraph, p: usize, evaluator: Evaluator, max_evals: usize) -> Self {
        let subproblems = match evaluator {
            Evaluator::Decomposed => decompose(graph, p),
            Evaluator::Full => Vec::new(),
        };
        Objective {
            graph,
            evaluator,
            subproblems,
            trace: Vec::new(),
            max_evals,
        }
    }

    fn energy(&self, params: &QaoaParams) -> Result<f64> {
        match self.evaluator {
            Evaluator::Decomposed => expectation_of(&self.subproblems, params),
            Evaluator::Full => expectation_full(self.graph, params),
        }
    }

    fn exhausted(&self) -> bool {
        self.trace.len() >= self.max_evals
    }

    fn record(&mut self, params: QaoaParams, energy: f64) {
        self.trace.push(TraceRow {
            eval: self.trace.len(),
            params,
            energy,
        });
    }

    fn eval(&mut self, x: &[f64]) -> Result<f64> {
        let params = QaoaParams::from_slice(x);
        let e = self.energy(&params)?;
        self.record(params, e);
        Ok(e)
    }

    /// Evaluates a batch in parallel, recording in input order.
    fn eval_batch(&mut self, points: Vec<QaoaParams>) -> Result<Vec<f64>> {
        let energies: Vec<f64> = points
            .par_iter()
            .map(|p| self.energy(p))
            .collect::<Result<_>>()?;
        for (p, &e) in points.into_iter().zip(&energies) {
            self.record(p, e);
        }
        Ok(energies)
    }
}

/// Minimizes `E_p` over the angles for depth `p`.
pub fn optimize(g: &WeightGraph, p: usize, config: &OptimizerConfig) -> Result<OptimizeResult> {
    if p == 0 {
        return Err(Error::Config("QAOA depth must be at least 1".into()));
    }
    match &config.init {
        Init::InterpChain => interp_chain(g, p, config),
        Init::Params(start) => {
            if start.p() != p {
                return Err(Error::Config(format!(
                    "initial angles have depth {}, expected {p}",
                    start.p()
                )));
            }
            run(g, start.clone(), config)
        }
        Init::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let gamma = (0..p).map(|_| rng.gen_range(0.0..GAMMA_RANGE)).collect();
            let beta = (0..p).map(|_| rng.gen_range(0.0..BETA_RANGE)).collect();
            run(g, QaoaParams { gamma, beta }, config)
        }
    }
}

fn interp_chain(g: &WeightGraph, p: usize, config: &OptimizerConfig) -> Result<OptimizeResult> {
    let first = OptimizerConfig {
        method: config.method,
        init: Init::Params(QaoaParams::zeros(1)),
        ..config.clone()
    };
    let mut result = run(g, QaoaParams::zeros(1), &first)?;
    let mut trace = std::mem::take(&mut result.trace);
    let mut converged = result.converged;
    for _ in 1..p {
        let start = interp(&result.params);
        let next = OptimizerConfig {
            method: Method::Simplex,
            ..config.clone()
        };
        result = run(g, start, &next)?;
        let shift = trace.len();
        trace.extend(result.trace.drain(..).map(|mut r| {
            r.eval += shift;
            r
        }));
        converged &= result.converged;
    }
    result.trace = trace;
    result.converged = converged;
    Ok(result)
}

fn run(g: &WeightGraph, start: QaoaParams, config: &OptimizerConfig) -> Result<OptimizeResult> {
    let p = start.p();
    let mut obj = Objective::new(g, p, config.evaluator, config.max_evals.max(1));
    let mut best_x = start.to_vec();
    let mut best_e = obj.eval(&best_x)?;
    let mut converged = true;

    let use_grid = matches!(config.method, Method::Grid | Method::GridSimplex);
    if use_grid {
        if config.method == Method::GridSimplex && p != 1 {
            return Err(Error::Config(
                "grid scan is only available for p = 1; use the simplex or Interp chaining".into(),
            ));
        }
        let axis = config.grid_points.max(1);
        let cells = axis.checked_pow(2 * p as u32).unwrap_or(usize::MAX);
        let mut points = Vec::new();
        for idx in 0..cells {
            let mut rest = idx;
            let mut x = Vec::with_capacity(2 * p);
            for d in 0..2 * p {
                let k = rest % axis;
                rest /= axis;
                let range = if d < p { GAMMA_RANGE } else { BETA_RANGE };
                x.push(range * k as f64 / axis as f64);
            }
            points.push(x);
        }
        let budget = config.max_evals.saturating_sub(obj.trace.len());
        if points.len() > budget {
            points.truncate(budget);
            converged = false;
        }
        let energies =
            obj.eval_batch(points.iter().map(|x| QaoaParams::from_slice(x)).collect())?;
        for (x, e) in points.into_iter().zip(energies) {
            if e < best_e {
                best_e = e;
                best_x = x;
            }
        }
    }

    if matches!(config.method, Method::Simplex | Method::GridSimplex) && converged {
        let step = if use_grid {
            // one grid cell in each direction
            (0..2 * p)
                .map(|d| {
                    let range = if d < p { GAMMA_RANGE } else { BETA_RANGE };
                    range / config.grid_points.max(1) as f64
                })
                .collect()
        } else {
            vec![0.1; 2 * p]
        };
        let (x, e, ok) = nelder_mead(&mut obj, best_x.clone(), best_e, &step, config)?;
        if e < best_e {
            best_x = x;
            best_e = e;
        }
        converged = ok;
    }

    Ok(OptimizeResult {
        params: QaoaParams::from_slice(&best_x),
        energy: best_e,
        trace: obj.trace,
        converged,
    })
}

/// Standard Nelder–Mead (reflection 1, expansion 2, contraction ½, shrink ½).
/// Ties keep the earlier vertex, so a flat landscape returns the start point.
fn nelder_mead(
    obj: &mut Objective<'_>,
    x0: Vec<f64>,
    f0: f64,
    step: &[f64],
    config: &OptimizerConfig,
) -> Result<(Vec<f64>, f64, bool)> {
    let dim = x0.len();
    let mut simplex = vec![(x0.clone(), f0)];
    for d in 0..dim {
        if obj.exhausted() {
            return Ok((x0, f0, false));
        }
        let mut x = x0.clone();
        x[d] += step[d];
        let f = obj.eval(&x)?;
        simplex.push((x, f));
    }

    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (best, worst) = (simplex[0].1, simplex[dim].1);
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if worst - best <= config.ftol && diameter <= config.xtol {
            let (x, f) = simplex.swap_remove(0);
            return Ok((x, f, true));
        }
        if obj.exhausted() {
            let (x, f) = simplex.swap_remove(0);
            return Ok((x, f, false));
        }

        let centroid: Vec<f64> = (0..dim)
            .map(|d| simplex[..dim].iter().map(|(x, _)| x[d]).sum::<f64>() / dim as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[dim].0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let xr = along(1.0);
        let fr = obj.eval(&xr)?;
        if fr < simplex[0].1 {
            let xe = along(2.0);
            let fe = obj.eval(&xe)?;
            simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[dim - 1].1 {
            simplex[dim] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < simplex[dim].1 {
            let xc = along(0.5);
            let fc = obj.eval(&xc)?;
            (xc, fc)
        } else {
            let xc = along(-0.5);
            let fc = obj.eval(&xc)?;
            (xc, fc)
        };
        if fc < simplex[dim].1.min(fr) {
            simplex[dim] = (xc, fc);
            continue;
        }
        let anchor = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            if obj.exhausted() {
                break;
            }
            let x: Vec<f64> = anchor
                .iter()
                .zip(&vertex.0)
                .map(|(a, v)| a + 0.5 * (v - a))
                .collect();
            let f = obj.eval(&x)?;
            *vertex = (x, f);
        }
    }
}
