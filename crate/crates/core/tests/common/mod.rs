//! Reference implementations used as test oracles. Deliberately naive and
//! independent of the library's own simulator and compiler internals.
#![allow(dead_code)]

use chainqaoa::compiler::{LayerKind, PhysicalCircuit};
use chainqaoa::problem::{Edge, WeightGraph};
use num_complex::Complex64;
use rand::Rng;

/// Random graph on `n` nodes: each pair is an edge with probability `density`,
/// weights in [-1, 1], and node weights present with probability `bias_prob`.
pub fn random_graph(rng: &mut impl Rng, n: usize, density: f64, bias_prob: f64) -> WeightGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                edges.push(Edge {
                    u,
                    v,
                    w: rng.gen_range(-1.0..1.0),
                });
            }
        }
    }
    let nodes = (0..n)
        .map(|_| {
            if rng.gen_bool(bias_prob) {
                rng.gen_range(-1.0..1.0)
            } else {
                0.0
            }
        })
        .collect();
    WeightGraph::new(nodes, edges, rng.gen_range(-2.0..2.0)).unwrap()
}

/// `C(z)` for basis index `x`, with `z_i = 1 − 2·bit_i`, offset excluded.
pub fn cost(g: &WeightGraph, x: usize) -> f64 {
    let z = |i: usize| if (x >> i) & 1 == 0 { 1.0 } else { -1.0 };
    let mut c = 0.0;
    for (i, h) in g.node_weights().iter().enumerate() {
        c += h * z(i);
    }
    for e in g.edges() {
        c += e.w * z(e.u) * z(e.v);
    }
    c
}

/// `∏_k e^{−iβ_k ΣX} e^{−iγ_k C} |+⟩^n` by direct dense evolution.
pub fn qaoa_state(g: &WeightGraph, gamma: &[f64], beta: &[f64]) -> Vec<Complex64> {
    let n = g.num_nodes();
    let dim = 1usize << n;
    let mut psi = vec![Complex64::new((dim as f64).powf(-0.5), 0.0); dim];
    let diag: Vec<f64> = (0..dim).map(|x| cost(g, x)).collect();
    for (&gm, &bt) in gamma.iter().zip(beta) {
        for (a, c) in psi.iter_mut().zip(&diag) {
            *a *= Complex64::from_polar(1.0, -gm * c);
        }
        let (co, si) = (bt.cos(), Complex64::new(0.0, -bt.sin()));
        for q in 0..n {
            for x in 0..dim {
                if x >> q & 1 == 0 {
                    let y = x | 1 << q;
                    let (a0, a1) = (psi[x], psi[y]);
                    psi[x] = a0 * co + a1 * si;
                    psi[y] = a0 * si + a1 * co;
                }
            }
        }
    }
    psi
}

pub fn expectation(g: &WeightGraph, psi: &[Complex64]) -> f64 {
    psi.iter()
        .enumerate()
        .map(|(x, a)| a.norm_sqr() * cost(g, x))
        .sum()
}

/// Reorders a state over chain positions into logical order, reading
/// logical qubit `l` from position `layout[l]`. Unmeasured positions must be |0⟩.
pub fn unpermute(psi: &[Complex64], layout: &[usize]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); 1 << layout.len()];
    for (y, slot) in out.iter_mut().enumerate() {
        let x: usize = layout
            .iter()
            .enumerate()
            .map(|(l, &p)| ((y >> l) & 1) << p)
            .sum();
        *slot = psi[x];
    }
    out
}

/// Largest `|a − e^{iφ} b|` after removing the best global phase.
pub fn phase_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let overlap: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    a.iter()
        .zip(b)
        .map(|(x, y)| (x * phase - y).norm())
        .fold(0.0, f64::max)
}

/// Dense statevector of a native circuit, gate by gate from the definitions.
pub fn run_physical(pc: &PhysicalCircuit) -> Vec<Complex64> {
    use chainqaoa::circuit::Gate;
    let n = pc.num_qubits();
    let mut psi = vec![Complex64::new(0.0, 0.0); 1 << n];
    psi[0] = Complex64::new(1.0, 0.0);
    let single = |psi: &mut Vec<Complex64>, q: usize, m: [[Complex64; 2]; 2]| {
        for x in 0..psi.len() {
            if x >> q & 1 == 0 {
                let y = x | 1 << q;
                let (a0, a1) = (psi[x], psi[y]);
                psi[x] = m[0][0] * a0 + m[0][1] * a1;
                psi[y] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    };
    let c = |re: f64, im: f64| Complex64::new(re, im);
    for g in pc.gates() {
        match *g {
            Gate::H(q) => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                single(
                    &mut psi,
                    q,
                    [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]],
                );
            }
            Gate::Rx(q, t) => {
                let (co, si) = ((t / 2.0).cos(), (t / 2.0).sin());
                single(
                    &mut psi,
                    q,
                    [[c(co, 0.0), c(0.0, -si)], [c(0.0, -si), c(co, 0.0)]],
                );
            }
            Gate::Rz(q, t) => {
                single(
                    &mut psi,
                    q,
                    [
                        [Complex64::from_polar(1.0, -t / 2.0), c(0.0, 0.0)],
                        [c(0.0, 0.0), Complex64::from_polar(1.0, t / 2.0)],
                    ],
                );
            }
            Gate::Cnot { control, target } => {
                for x in 0..psi.len() {
                    if x >> control & 1 == 1 && x >> target & 1 == 0 {
                        psi.swap(x, x | 1 << target);
                    }
                }
            }
            other => panic!("non-native gate {other:?}"),
        }
    }
    psi
}

/// Meeting cycle (1-based) of every pair of initial positions, found by
/// walking the template layer by layer.
pub fn meeting_table(kinds: &[LayerKind], n: usize) -> Vec<Vec<usize>> {
    let mut at: Vec<usize> = (0..n).collect(); // position → initial position
    let mut table = vec![vec![0usize; n]; n];
    for (c, kind) in kinds.iter().enumerate() {
        let (first, rzz) = match kind {
            LayerKind::RzzEven => (0, true),
            LayerKind::RzzOdd => (1, true),
            LayerKind::SwapEven => (0, false),
            LayerKind::SwapOdd => (1, false),
        };
        let mut a = first;
        while a + 1 < n {
            if rzz {
                let (x, y) = (at[a], at[a + 1]);
                assert_eq!(table[x][y], 0, "pair ({x}, {y}) met twice");
                table[x][y] = c + 1;
                table[y][x] = c + 1;
            } else {
                at.swap(a, a + 1);
            }
            a += 2;
        }
    }
    table
}

/// Latest meeting cycle over all edges when node `v` starts on `pos[v]`.
pub fn placement_cost(g: &WeightGraph, table: &[Vec<usize>], pos: &[usize]) -> usize {
    g.edges()
        .iter()
        .map(|e| table[pos[e.u]][pos[e.v]])
        .max()
        .unwrap_or(0)
}

/// Every ordering of `0..n`, by Heap's algorithm.
pub fn permutations(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut a: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    visit(&a);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            visit(&a);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Best fidelity product over all simple paths with `k` qubits, per `k`
/// (`None` when no such path exists).
pub fn best_paths(n: usize, couplers: &[(u32, u32, f64)]) -> Vec<Option<f64>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b, f) in couplers {
        adj[a as usize].push((b as usize, f));
        adj[b as usize].push((a as usize, f));
    }
    let mut best = vec![None; n + 1];
    fn dfs(
        v: usize,
        f: f64,
        len: usize,
        seen: &mut Vec<bool>,
        adj: &[Vec<(usize, f64)>],
        best: &mut Vec<Option<f64>>,
    ) {
        if len >= 2 {
            let slot = &mut best[len];
            if slot.map_or(true, |b: f64| f > b) {
                *slot = Some(f);
            }
        }
        for &(w, fw) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                dfs(w, f * fw, len + 1, seen, adj, best);
                seen[w] = false;
            }
        }
    }
    for s in 0..n {
        let mut seen = vec![false; n];
        seen[s] = true;
        dfs(s, 1.0, 1, &mut seen, &adj, &mut best);
    }
    best
}
