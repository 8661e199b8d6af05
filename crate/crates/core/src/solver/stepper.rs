use nalgebra::{DMatrix, DVector, Dyn, LU};

use super::newton::{newton_continuation_solve, JacobianMode, NewtonSettings};
use crate::error::{Error, Result};
use crate::methods::{DownwindLmm, DownwindTableau, Method};
use crate::spatial::{GridFunction, SemiDiscretization};

/// Everything needed to take one step.
pub struct StepContext<'a> {
    pub method: &'a Method,
    pub semi: &'a dyn SemiDiscretization,
    pub dt: f64,
    pub newton: NewtonSettings,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StepStats {
    pub newton_iterations: usize,
    /// Final nonlinear residual (zero for direct solves).
    pub residual: f64,
}

/// One entry of multistep history: `(u, F(u), F̃(u))`.
#[derive(Debug, Clone)]
pub struct HistoryEntry {
    pub u: GridFunction,
    pub f: Vec<f64>,
    pub ftilde: Vec<f64>,
}

impl HistoryEntry {
    pub fn new(semi: &dyn SemiDiscretization, u: GridFunction) -> Self {
        let n = semi.size();
        let mut f = vec![0.0; n];
        let mut ftilde = vec![0.0; n];
        semi.apply_f(u.values(), &mut f);
        semi.apply_ftilde(u.values(), &mut ftilde);
        HistoryEntry { u, f, ftilde }
    }
}

/// Factorized linear stage system, reusable while `dt` is unchanged.
struct LinearStageSolver {
    dt: f64,
    lu: LU<f64, Dyn, Dyn>,
    l: DMatrix<f64>,
    /// Matrix of `F̃`, i.e. `-L̃`.
    ft: DMatrix<f64>,
}

/// Steps a fixed method on a fixed semi-discretization, caching the linear
/// factorization between steps of equal size.
pub struct Stepper<'a> {
    method: &'a Method,
    semi: &'a dyn SemiDiscretization,
    newton: NewtonSettings,
    linear: Option<(DMatrix<f64>, DMatrix<f64>)>,
    cache: Option<LinearStageSolver>,
}

impl<'a> Stepper<'a> {
    pub fn new(
        method: &'a Method,
        semi: &'a dyn SemiDiscretization,
        newton: NewtonSettings,
    ) -> Result<Self> {
        newton.validate()?;
        let linear = match newton.jacobian_mode {
            JacobianMode::AssembledLinear => semi.linear_matrices().map(|(l, lt)| (l, -lt)),
            JacobianMode::FiniteDifferenceMatvec => None,
        };
        Ok(Stepper {
            method,
            semi,
            newton,
            linear,
            cache: None,
        })
    }

    pub fn method(&self) -> &Method {
        self.method
    }

    fn linear_solver(
        &mut self,
        dt: f64,
        block: impl Fn(usize, usize) -> (f64, f64),
        s: usize,
    ) -> Result<&LinearStageSolver> {
        let stale = self.cache.as_ref().is_none_or(|c| c.dt != dt);
        if stale {
            let (l, ft) = self.linear.clone().expect("linear path only");
            let n = l.nrows();
            let mut k = DMatrix::identity(s * n, s * n);
            for i in 0..s {
                for j in 0..s {
                    let (a, at) = block(i, j);
                    if a == 0.0 && at == 0.0 {
                        continue;
                    }
                    let blk = &l * (dt * a) + &ft * (dt * at);
                    let mut view = k.view_mut((i * n, j * n), (n, n));
                    view -= blk;
                }
            }
            let lu = k.lu();
            if !lu.is_invertible() {
                return Err(Error::SingularMatrix {
                    min_sv: 0.0,
                    max_sv: 0.0,
                });
            }
            self.cache = Some(LinearStageSolver { dt, lu, l, ft });
        }
        Ok(self.cache.as_ref().expect("just built"))
    }

    /// Advances `u` by one Runge–Kutta step of size `dt`.
    pub fn rk_step(&mut self, u: &[f64], dt: f64) -> Result<(Vec<f64>, StepStats)> {
        let Method::RungeKutta(t) = self.method else {
            return Err(Error::domain("rk_step needs a Runge-Kutta method"));
        };
        let t: &DownwindTableau = t;
        let n = u.len();
        let s = t.stages();
        if n != self.semi.size() {
            return Err(Error::Dimension(format!(
                "state has {n} entries, operator expects {}",
                self.semi.size()
            )));
        }
        let semi = self.semi;
        let mut stats = StepStats::default();
        let needs_f: Vec<bool> = (0..s)
            .map(|j| t.b()[j] != 0.0 || (0..s).any(|i| t.a()[(i, j)] != 0.0))
            .collect();
        let needs_ft: Vec<bool> = (0..s)
            .map(|j| t.btilde()[j] != 0.0 || (0..s).any(|i| t.atilde()[(i, j)] != 0.0))
            .collect();

        let mut fs = vec![vec![0.0; n]; s];
        let mut fts = vec![vec![0.0; n]; s];

        if t.is_explicit() {
            for i in 0..s {
                let mut y = u.to_vec();
                for j in 0..i {
                    let (a, at) = (t.a()[(i, j)], t.atilde()[(i, j)]);
                    for k in 0..n {
                        y[k] += dt * (a * fs[j][k] + at * fts[j][k]);
                    }
                }
                if needs_f[i] {
                    semi.apply_f(&y, &mut fs[i]);
                }
                if needs_ft[i] {
                    semi.apply_ftilde(&y, &mut fts[i]);
                }
            }
        } else if self.linear.is_some() {
            let solver = self.linear_solver(dt, |i, j| (t.a()[(i, j)], t.atilde()[(i, j)]), s)?;
            let rhs = DVector::from_fn(s * n, |idx, _| u[idx % n]);
            let y = solver.lu.solve(&rhs).ok_or(Error::SingularMatrix {
                min_sv: 0.0,
                max_sv: 0.0,
            })?;
            for j in 0..s {
                let yj = y.rows(j * n, n);
                fs[j].copy_from_slice((&solver.l * yj).as_slice());
                fts[j].copy_from_slice((&solver.ft * yj).as_slice());
            }
        } else {
            // θ scales the step size; θ = 0 is solved by the guess
            let residual = |theta: f64, y: &[f64], out: &mut [f64]| {
                let h = theta * dt;
                let mut fy = vec![vec![0.0; n]; s];
                let mut fty = vec![vec![0.0; n]; s];
                for j in 0..s {
                    let yj = &y[j * n..(j + 1) * n];
                    if needs_f[j] {
                        semi.apply_f(yj, &mut fy[j]);
                    }
                    if needs_ft[j] {
                        semi.apply_ftilde(yj, &mut fty[j]);
                    }
                }
                for i in 0..s {
                    for k in 0..n {
                        let mut acc = y[i * n + k] - u[k];
                        for j in 0..s {
                            acc -= h * (t.a()[(i, j)] * fy[j][k] + t.atilde()[(i, j)] * fty[j][k]);
                        }
                        out[i * n + k] = acc;
                    }
                }
            };
            let guess: Vec<f64> = (0..s).flat_map(|_| u.iter().copied()).collect();
            let out = newton_continuation_solve(&residual, guess, &self.newton)?;
            stats = StepStats {
                newton_iterations: out.iterations,
                residual: out.residual,
            };
            for j in 0..s {
                let yj = &out.x[j * n..(j + 1) * n];
                if needs_f[j] {
                    semi.apply_f(yj, &mut fs[j]);
                }
                if needs_ft[j] {
                    semi.apply_ftilde(yj, &mut fts[j]);
                }
            }
        }

        let mut next = u.to_vec();
        for j in 0..s {
            let (b, bt) = (t.b()[j], t.btilde()[j]);
            for k in 0..n {
                next[k] += dt * (b * fs[j][k] + bt * fts[j][k]);
            }
        }
        Ok((next, stats))
    }

    /// Advances a multistep method given the last `k` states, oldest first.
    pub fn lmm_step(&mut self, history: &[HistoryEntry], dt: f64) -> Result<(Vec<f64>, StepStats)> {
        let Method::Multistep(m) = self.method else {
            return Err(Error::domain("lmm_step needs a multistep method"));
        };
        let m: &DownwindLmm = m;
        let k = m.steps();
        if history.len() != k {
            return Err(Error::HistoryLength {
                expected: k,
                got: history.len(),
            });
        }
        let n = self.semi.size();
        let mut rhs = vec![0.0; n];
        for (j, h) in history.iter().enumerate() {
            let (a, b, bt) = (m.alpha()[j], m.beta()[j], m.betatilde()[j]);
            let uj = h.u.values();
            for i in 0..n {
                rhs[i] += a * uj[i] + dt * (b * h.f[i] + bt * h.ftilde[i]);
            }
        }
        if m.is_explicit() {
            return Ok((rhs, StepStats::default()));
        }
        let (bk, btk) = (m.beta()[k], m.betatilde()[k]);
        if self.linear.is_some() {
            let solver = self.linear_solver(dt, |_, _| (bk, btk), 1)?;
            let x = solver
                .lu
                .solve(&DVector::from_vec(rhs))
                .ok_or(Error::SingularMatrix {
                    min_sv: 0.0,
                    max_sv: 0.0,
                })?;
            return Ok((x.as_slice().to_vec(), StepStats::default()));
        }
        let semi = self.semi;
        let residual = |theta: f64, x: &[f64], out: &mut [f64]| {
            let h = theta * dt;
            let mut f = vec![0.0; n];
            let mut ft = vec![0.0; n];
            semi.apply_f(x, &mut f);
            if btk != 0.0 {
                semi.apply_ftilde(x, &mut ft);
            }
            for i in 0..n {
                out[i] = x[i] - h * (bk * f[i] + btk * ft[i]) - rhs[i];
            }
        };
        let guess = history[k - 1].u.values().to_vec();
        let out = newton_continuation_solve(&residual, guess, &self.newton)?;
        Ok((
            out.x,
            StepStats {
                newton_iterations: out.iterations,
                residual: out.residual,
            },
        ))
    }
}

/// One Runge–Kutta step.
pub fn rk_step(ctx: &StepContext, u: &GridFunction) -> Result<(GridFunction, StepStats)> {
    if !(ctx.dt >= 0.0) {
        return Err(Error::domain("step size must be nonnegative"));
    }
    let mut stepper = Stepper::new(ctx.method, ctx.semi, ctx.newton)?;
    let (v, stats) = stepper.rk_step(u.values(), ctx.dt)?;
    Ok((GridFunction::new(*u.grid(), v)?, stats))
}

/// One multistep step from `history` (oldest first, length `k`).
pub fn lmm_step(ctx: &StepContext, history: &[HistoryEntry]) -> Result<(GridFunction, StepStats)> {
    if !(ctx.dt >= 0.0) {
        return Err(Error::domain("step size must be nonnegative"));
    }
    let mut stepper = Stepper::new(ctx.method, ctx.semi, ctx.newton)?;
    let (v, stats) = stepper.lmm_step(history, ctx.dt)?;
    let grid = *history
        .first()
        .ok_or(Error::HistoryLength {
            expected: 1,
            got: 0,
        })?
        .u
        .grid();
    Ok((GridFunction::new(grid, v)?, stats))
}
