use crate::error::{Error, Result};

/// Optimization direction of the original problem.
///
/// Matrices are always minimized; a `Maximize` problem was negated when it was
/// built and [`QuboMatrix::objective`] negates back for display.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Minimize,
    Maximize,
}

/// Dense symmetric QUBO matrix with a constant term: `f(x) = xᵀQx + offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuboMatrix {
    n: usize,
    q: Vec<f64>,
    offset: f64,
    sense: Sense,
}

impl QuboMatrix {
    pub fn zeros(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Model("a QUBO needs at least one variable".into()));
        }
        Ok(QuboMatrix {
            n,
            q: vec![0.0; n * n],
            offset: 0.0,
            sense: Sense::Minimize,
        })
    }

    /// Builds from a square row-major matrix. Off-diagonals are replaced by
    /// `(Q_ij + Q_ji) / 2`; the diagonal is kept as given.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut m = Self::zeros(n)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Model(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
        }
        for i in 0..n {
            m.q[i * n + i] = rows[i][i];
            for j in (i + 1)..n {
                let s = 0.5 * (rows[i][j] + rows[j][i]);
                m.q[i * n + j] = s;
                m.q[j * n + i] = s;
            }
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.q[i * self.n + j]
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub(crate) fn set_sense(&mut self, sense: Sense) {
        self.sense = sense;
    }

    pub(crate) fn add_offset(&mut self, c: f64) {
        self.offset += c;
    }

    /// Adds `c·x_i` (equivalently `c·x_i²`).
    pub(crate) fn add_linear(&mut self, i: usize, c: f64) {
        self.q[i * self.n + i] += c;
    }

    /// Adds `c·x_i·x_j`, split evenly across the two off-diagonal cells.
    pub(crate) fn add_quadratic(&mut self, i: usize, j: usize, c: f64) {
        if i == j {
            self.add_linear(i, c);
        } else {
            self.q[i * self.n + j] += 0.5 * c;
            self.q[j * self.n + i] += 0.5 * c;
        }
    }

    /// `xᵀQx + offset`, the quantity being minimized.
    pub fn value(&self, x: &[bool]) -> f64 {
        assert_eq!(x.len(), self.n, "assignment length");
        let mut total = self.offset;
        for i in 0..self.n {
            if !x[i] {
                continue;
            }
            total += self.get(i, i);
            for j in (i + 1)..self.n {
                if x[j] {
                    total += 2.0 * self.get(i, j);
                }
            }
        }
        total
    }

    /// Objective in the original problem's sense (negated back for maximization).
    pub fn objective(&self, x: &[bool]) -> f64 {
        match self.sense {
            Sense::Minimize => self.value(x),
            Sense::Maximize => -self.value(x),
        }
    }

    /// Largest `|Q_ij − Q_ji|`; zero for every matrix this type produces.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }
}
