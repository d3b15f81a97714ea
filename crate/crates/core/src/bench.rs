//! Compilation benchmarks on random unit-weight graphs.

use std::fmt::Write as _;
use std::time::Instant;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::compiler::{compile, ideal_chain, SearchOptions};
use crate::engine::QaoaParams;
use crate::error::{Error, Result};
use crate::problem::WeightGraph;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub d: f64,
    pub p: usize,
    pub rep: usize,
    pub compile_ms: f64,
    pub depth_pre: usize,
    pub depth_post: usize,
    pub cnot_count: usize,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub ns: Vec<usize>,
    pub densities: Vec<f64>,
    pub ps: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    pub search: SearchOptions,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            ns: vec![10, 20, 30, 40],
            densities: vec![0.8],
            ps: vec![1],
            reps: 20,
            seed: 0,
            search: SearchOptions::default(),
        }
    }
}

/// SplitMix64 finalizer, used to give every (n, d, rep) cell its own stream.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Uniform graph with `⌊d·C(n,2)⌋` distinct unit-weight edges and no node weights.
pub fn random_graph(n: usize, d: f64, seed: u64) -> Result<WeightGraph> {
    if !(0.0..=1.0).contains(&d) {
        return Err(Error::Config(format!("edge density {d} outside [0, 1]")));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let m = (d * pairs.len() as f64 + 1e-9).floor() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen: Vec<(usize, usize)> = sample(&mut rng, pairs.len(), m)
        .into_iter()
        .map(|k| pairs[k])
        .collect();
    chosen.sort_unstable();
    WeightGraph::unweighted(n, &chosen)
}

/// Seed of the graph used in cell `(n, d_index, rep)`; shared across `p`.
pub fn cell_seed(seed: u64, n: usize, d_index: usize, rep: usize) -> u64 {
    mix(mix(mix(seed ^ n as u64) ^ d_index as u64) ^ rep as u64)
}

/// One row per `(n, d, p, rep)`, in that nesting order. Cells run in parallel.
pub fn run_bench(config: &BenchConfig) -> Result<Vec<BenchRow>> {
    if config.reps == 0 {
        return Err(Error::Config("reps must be at least 1".into()));
    }
    if let Some(&p) = config.ps.iter().find(|&&p| p == 0) {
        return Err(Error::Config(format!("depth p = {p} is not allowed")));
    }
    let mut cells = Vec::new();
    for &n in &config.ns {
        for (di, &d) in config.densities.iter().enumerate() {
            for &p in &config.ps {
                for rep in 0..config.reps {
                    cells.push((n, di, d, p, rep));
                }
            }
        }
    }
    cells
        .into_par_iter()
        .map(|(n, di, d, p, rep)| {
            let g = random_graph(n, d, cell_seed(config.seed, n, di, rep))?;
            // angles only change gate arguments, never structure
            let params = QaoaParams::new(vec![0.5; p], vec![0.25; p])?;
            let start = Instant::now();
            let c = compile(&g, &params, &ideal_chain(n), config.search)?;
            let compile_ms = start.elapsed().as_secs_f64() * 1e3;
            Ok(BenchRow {
                n,
                d,
                p,
                rep,
                compile_ms,
                depth_pre: c.depth_pre,
                depth_post: c.depth_post(),
                cnot_count: c.cnot_count(),
            })
        })
        .collect()
}

pub const CSV_HEADER: &str = "n,d,p,rep,compile_ms,depth_pre,depth_post,cnot_count";

/// Per-cell means over reps, keyed by `(n, d, p)` in first-seen order.
pub fn cell_means(rows: &[BenchRow]) -> Vec<BenchMean> {
    let mut out: Vec<BenchMean> = Vec::new();
    for r in rows {
        let i = match out.iter().position(|m| (m.n, m.d, m.p) == (r.n, r.d, r.p)) {
            Some(i) => i,
            None => {
                out.push(BenchMean {
                    n: r.n,
                    d: r.d,
                    p: r.p,
                    reps: 0,
                    compile_ms: 0.0,
                    depth_pre: 0.0,
                    depth_post: 0.0,
                    cnot_count: 0.0,
                });
                out.len() - 1
            }
        };
        let m = &mut out[i];
        m.reps += 1;
        m.compile_ms += r.compile_ms;
        m.depth_pre += r.depth_pre as f64;
        m.depth_post += r.depth_post as f64;
        m.cnot_count += r.cnot_count as f64;
    }
    for m in &mut out {
        let k = m.reps as f64;
        m.compile_ms /= k;
        m.depth_pre /= k;
        m.depth_post /= k;
        m.cnot_count /= k;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchMean {
    pub n: usize,
    pub d: f64,
    pub p: usize,
    pub reps: usize,
    pub compile_ms: f64,
    pub depth_pre: f64,
    pub depth_post: f64,
    pub cnot_count: f64,
}

/// Data rows followed by one `rep = mean` row per cell.
pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{:.3},{},{},{}",
            r.n, r.d, r.p, r.rep, r.compile_ms, r.depth_pre, r.depth_post, r.cnot_count
        );
    }
    for m in cell_means(rows) {
        let _ = writeln!(
            out,
            "{},{},{},mean,{:.3},{},{},{}",
            m.n, m.d, m.p, m.compile_ms, m.depth_pre, m.depth_post, m.cnot_count
        );
    }
    out
}
