//! The RZZ/SWAP template for a chain of `n` positions and the table of the
//! cycle at which each pair of initial positions meets.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerKind {
    /// RZZ on `(2i, 2i+1)`.
    RzzEven,
    /// RZZ on `(2i+1, 2i+2)`.
    RzzOdd,
    /// SWAP on `(2i+1, 2i+2)`.
    SwapOdd,
    /// SWAP on `(2i, 2i+1)`.
    SwapEven,
}

impl LayerKind {
    pub fn is_rzz(self) -> bool {
        matches!(self, LayerKind::RzzEven | LayerKind::RzzOdd)
    }

    /// Position pairs `(a, a+1)` the layer acts on in an `n`-chain.
    pub fn pairs(self, n: usize) -> Vec<(usize, usize)> {
        let start = match self {
            LayerKind::RzzEven | LayerKind::SwapEven => 0,
            LayerKind::RzzOdd | LayerKind::SwapOdd => 1,
        };
        (start..n.saturating_sub(1))
            .step_by(2)
            .map(|a| (a, a + 1))
            .collect()
    }
}

const PATTERN: [LayerKind; 4] = [
    LayerKind::RzzEven,
    LayerKind::RzzOdd,
    LayerKind::SwapOdd,
    LayerKind::SwapEven,
];

/// Layer sequence whose RZZ layers bring every pair of logical qubits
/// together exactly once.
///
/// Odd `n`: `⌊n/2⌋` repetitions of the four-step pattern plus one RZZ-even
/// layer (`2n − 1` cycles). Even `n`: `n/2` repetitions with the final two
/// SWAP layers dropped (`2n − 2` cycles).
#[derive(Debug, Clone, PartialEq)]
pub struct Template {
    n: usize,
    layers: Vec<LayerKind>,
}

impl Template {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Config(format!(
                "a template needs at least 2 positions, got {n}"
            )));
        }
        let mut layers: Vec<LayerKind> =
            PATTERN.iter().copied().cycle().take(4 * (n / 2)).collect();
        if n % 2 == 0 {
            layers.truncate(layers.len() - 2);
        } else {
            layers.push(LayerKind::RzzEven);
        }
        Ok(Template { n, layers })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Layer kinds; cycle `c` (1-based) is `layers()[c - 1]`.
    pub fn layers(&self) -> &[LayerKind] {
        &self.layers
    }

    pub fn cycles(&self) -> usize {
        self.layers.len()
    }

    /// For each cycle, the pairs of *initial* positions whose occupants meet
    /// there (empty for SWAP cycles).
    pub fn meetings(&self) -> Vec<Vec<(usize, usize)>> {
        let mut occupant: Vec<usize> = (0..self.n).collect();
        self.layers
            .iter()
            .map(|kind| {
                let pairs = kind.pairs(self.n);
                if kind.is_rzz() {
                    pairs
                        .iter()
                        .map(|&(a, b)| {
                            let (x, y) = (occupant[a], occupant[b]);
                            (x.min(y), x.max(y))
                        })
                        .collect()
                } else {
                    for &(a, b) in &pairs {
                        occupant.swap(a, b);
                    }
                    Vec::new()
                }
            })
            .collect()
    }
}

/// `ExeR(a, b)`: 1-based cycle at which the qubits initially on positions `a`
/// and `b` receive their RZZ.
#[derive(Debug, Clone, PartialEq)]
pub struct ExeRTable {
    n: usize,
    cycle: Vec<usize>,
}

impl ExeRTable {
    pub fn new(n: usize) -> Result<Self> {
        Ok(Self::from_template(&Template::new(n)?))
    }

    pub fn from_template(t: &Template) -> Self {
        let n = t.n();
        let mut cycle = vec![0; n * n];
        for (c, pairs) in t.meetings().iter().enumerate() {
            for &(a, b) in pairs {
                cycle[a * n + b] = c + 1;
                cycle[b * n + a] = c + 1;
            }
        }
        ExeRTable { n, cycle }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Zero on the diagonal.
    #[inline]
    pub fn get(&self, a: usize, b: usize) -> usize {
        self.cycle[a * self.n + b]
    }
}
