//! Dense two-phase simplex for `A x = b, x >= 0`.
//!
//! Problems here have at most a few hundred variables, so a full tableau is
//! kept and every pivot touches every entry.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Phase-one objective at or below this counts as feasible.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Pivots before switching from Dantzig's rule to Bland's rule.
pub const BLAND_AFTER: usize = 1_000;

/// Pivots before giving up.
pub const MAX_PIVOTS: usize = 100_000;

const PIVOT_TOL: f64 = 1e-11;
const COST_TOL: f64 = 1e-12;

/// Equality-form linear program. Every variable has an implicit lower bound
/// of zero. The objective, when present, is minimized in phase two.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub objective: Option<DVector<f64>>,
}

impl LinearProgram {
    pub fn new(a: DMatrix<f64>, b: DVector<f64>) -> Self {
        LinearProgram {
            a,
            b,
            objective: None,
        }
    }

    pub fn with_objective(mut self, c: DVector<f64>) -> Self {
        self.objective = Some(c);
        self
    }

    pub fn num_vars(&self) -> usize {
        self.a.ncols()
    }

    /// Largest `|A x - b|` over all rows.
    pub fn residual(&self, x: &DVector<f64>) -> f64 {
        (&self.a * x - &self.b).amax()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    /// A basic feasible point (the optimum when an objective was given).
    pub x: Option<DVector<f64>>,
    /// Minimized sum of artificial variables after row scaling.
    pub infeasibility: f64,
    pub objective: Option<f64>,
    pub pivots: usize,
}

impl LpSolution {
    pub fn feasible(&self) -> bool {
        self.status != LpStatus::Infeasible
    }
}

/// Phase one only: decides feasibility and returns a basic feasible point.
pub fn lp_feasible(lp: &LinearProgram) -> Result<LpSolution> {
    solve_impl(lp, false)
}

/// Phase one followed by minimization of `lp.objective` (if any).
pub fn lp_solve(lp: &LinearProgram) -> Result<LpSolution> {
    solve_impl(lp, true)
}

struct Tableau {
    /// `m` constraint rows, each `n + m + 1` wide (structural, artificial, rhs).
    t: DMatrix<f64>,
    /// Reduced costs, same width; last entry is minus the objective value.
    cost: DVector<f64>,
    basis: Vec<usize>,
    n: usize,
    m: usize,
    pivots: usize,
}

impl Tableau {
    fn rhs(&self) -> usize {
        self.n + self.m
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let w = self.t.ncols();
        let pv = self.t[(row, col)];
        for j in 0..w {
            self.t[(row, j)] /= pv;
        }
        for i in 0..self.m {
            if i == row {
                continue;
            }
            let f = self.t[(i, col)];
            if f != 0.0 {
                for j in 0..w {
                    let v = self.t[(row, j)];
                    self.t[(i, j)] -= f * v;
                }
            }
        }
        let f = self.cost[col];
        if f != 0.0 {
            for j in 0..w {
                self.cost[j] -= f * self.t[(row, j)];
            }
        }
        self.basis[row] = col;
        self.pivots += 1;
    }

    /// Runs simplex iterations over columns `0..allowed`. Returns false when
    /// the objective is unbounded below.
    fn optimize(&mut self, allowed: usize) -> Result<bool> {
        loop {
            if self.pivots >= MAX_PIVOTS {
                return Err(Error::Cycling(self.pivots));
            }
            let bland = self.pivots >= BLAND_AFTER;
            let mut enter = None;
            let mut best = -COST_TOL;
            for j in 0..allowed {
                let d = self.cost[j];
                if d < best {
                    enter = Some(j);
                    if bland {
                        break;
                    }
                    best = d;
                }
            }
            let Some(col) = enter else {
                return Ok(true);
            };
            let rhs = self.rhs();
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let a = self.t[(i, col)];
                if a > PIVOT_TOL {
                    let ratio = self.t[(i, rhs)].max(0.0) / a;
                    let better = match leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < lr - 1e-15
                                || (ratio <= lr + 1e-15 && self.basis[i] < self.basis[li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                Some((row, _)) => self.pivot(row, col),
                None => return Ok(false),
            }
        }
    }
}

fn solve_impl(lp: &LinearProgram, phase_two: bool) -> Result<LpSolution> {
    let (m, n) = lp.a.shape();
    if lp.b.len() != m {
        return Err(Error::Dimension(format!(
            "LP with {m} rows but right-hand side of length {}",
            lp.b.len()
        )));
    }
    if lp.a.iter().chain(lp.b.iter()).any(|x| !x.is_finite()) {
        return Err(Error::domain("LP data must be finite"));
    }
    let w = n + m + 1;
    let mut t = DMatrix::zeros(m, w);
    for i in 0..m {
        let scale = lp.a.row(i).amax().max(lp.b[i].abs()).max(f64::MIN_POSITIVE);
        let sign = if lp.b[i] < 0.0 { -1.0 } else { 1.0 };
        let f = sign / scale;
        for j in 0..n {
            t[(i, j)] = lp.a[(i, j)] * f;
        }
        t[(i, n + i)] = 1.0;
        t[(i, n + m)] = lp.b[i] * f;
    }
    // phase one: minimize the sum of artificials
    let mut cost = DVector::zeros(w);
    for i in 0..m {
        for j in 0..n {
            cost[j] -= t[(i, j)];
        }
        cost[n + m] -= t[(i, n + m)];
    }
    let mut tab = Tableau {
        t,
        cost,
        basis: (n..n + m).collect(),
        n,
        m,
        pivots: 0,
    };
    tab.optimize(n + m)?;
    let infeasibility = (-tab.cost[n + m]).max(0.0);
    if infeasibility > FEASIBILITY_TOL {
        return Ok(LpSolution {
            status: LpStatus::Infeasible,
            x: None,
            infeasibility,
            objective: None,
            pivots: tab.pivots,
        });
    }

    // drive remaining artificials out of the basis where possible
    for row in 0..m {
        if tab.basis[row] >= n {
            if let Some(col) = (0..n).find(|&j| tab.t[(row, j)].abs() > 1e-9) {
                tab.pivot(row, col);
            }
        }
    }

    let mut status = LpStatus::Optimal;
    let mut objective = None;
    if let (true, Some(c)) = (phase_two, lp.objective.as_ref()) {
        if c.len() != n {
            return Err(Error::Dimension("objective length".into()));
        }
        let mut cost = DVector::zeros(w);
        for j in 0..n {
            cost[j] = c[j];
        }
        for row in 0..m {
            let bj = tab.basis[row];
            let cb = if bj < n { c[bj] } else { 0.0 };
            if cb != 0.0 {
                for j in 0..w {
                    cost[j] -= cb * tab.t[(row, j)];
                }
            }
        }
        tab.cost = cost;
        if !tab.optimize(n)? {
            status = LpStatus::Unbounded;
        }
        objective = Some(-tab.cost[n + m]);
    }

    let mut x = DVector::zeros(n);
    for row in 0..m {
        let bj = tab.basis[row];
        if bj < n {
            x[bj] = tab.t[(row, n + m)].max(0.0);
        }
    }
    Ok(LpSolution {
        status,
        x: Some(x),
        infeasibility,
        objective,
        pivots: tab.pivots,
    })
}
