use serde::Serialize;

use crate::error::{Error, Result};

/// Uniform periodic grid on `[0, 1)` with nodes `x_i = i dx`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeriodicGrid {
    n: usize,
    dx: f64,
}

impl PeriodicGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!(
                "grid needs at least 2 cells, got {n}"
            )));
        }
        Ok(PeriodicGrid {
            n,
            dx: 1.0 / n as f64,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn node(&self, i: usize) -> f64 {
        i as f64 * self.dx
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|i| self.node(i))
    }

    pub fn sample(&self, f: impl Fn(f64) -> f64) -> GridFunction {
        GridFunction {
            grid: *self,
            values: self.nodes().map(f).collect(),
        }
    }

    pub fn zeros(&self) -> GridFunction {
        GridFunction {
            grid: *self,
            values: vec![0.0; self.n],
        }
    }
}

/// Values on a periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: PeriodicGrid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: PeriodicGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Dimension(format!(
                "grid has {} nodes but {} values were given",
                grid.len(),
                values.len()
            )));
        }
        Ok(GridFunction { grid, values })
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub(crate) fn with_values(&self, values: Vec<f64>) -> GridFunction {
        debug_assert_eq!(values.len(), self.grid.len());
        GridFunction {
            grid: self.grid,
            values,
        }
    }

    /// Index reversal `u_i -> u_{n-1-i}`.
    pub fn mirrored(&self) -> GridFunction {
        let mut v = self.values.clone();
        v.reverse();
        self.with_values(v)
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// `self - other`, entrywise.
    pub fn difference(&self, other: &GridFunction) -> GridFunction {
        self.with_values(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

/// Periodic total variation `Σ_i |u_{i+1} - u_i|`.
pub fn tv_seminorm(u: &GridFunction) -> f64 {
    let v = u.values();
    let n = v.len();
    (0..n).map(|i| (v[(i + 1) % n] - v[i]).abs()).sum()
}

pub fn max_norm(u: &GridFunction) -> f64 {
    u.values().iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `1 - H(x - 1/2)`: one on `[0, 1/2)`, zero elsewhere (a node at exactly
/// `1/2` gets zero).
pub fn square_wave(x: f64) -> f64 {
    if x.rem_euclid(1.0) < 0.5 {
        1.0
    } else {
        0.0
    }
}

pub fn sine_wave(x: f64) -> f64 {
    (2.0 * std::f64::consts::PI * x).sin()
}
