//! Inexact Newton with matrix-free restarted GMRES.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JacobianMode {
    /// Central finite-difference directional derivatives inside GMRES.
    FiniteDifferenceMatvec,
    /// Assemble and factor the stage matrix when the operators are linear;
    /// nonlinear operators fall back to finite-difference matvecs.
    AssembledLinear,
}

#[derive(Debug, Clone, Copy)]
pub struct NewtonSettings {
    /// Convergence is declared when `‖G(x)‖∞ <= abs_tol + rel_tol ‖G(x0)‖∞`.
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_newton: usize,
    pub krylov_restart: usize,
    /// Relative residual reduction asked of each linear solve.
    pub krylov_tol: f64,
    /// Upper bound on GMRES cycles per Newton iteration.
    pub krylov_max_cycles: usize,
    pub jacobian_mode: JacobianMode,
}

impl Default for NewtonSettings {
    fn default() -> Self {
        NewtonSettings {
            abs_tol: 1e-10,
            rel_tol: 1e-12,
            max_newton: 50,
            krylov_restart: 30,
            krylov_tol: 1e-4,
            krylov_max_cycles: 40,
            jacobian_mode: JacobianMode::AssembledLinear,
        }
    }
}

impl NewtonSettings {
    pub fn validate(&self) -> Result<()> {
        let positive = [self.abs_tol, self.rel_tol, self.krylov_tol]
            .iter()
            .all(|&t| t > 0.0);
        if !positive
            || self.max_newton == 0
            || self.krylov_restart == 0
            || self.krylov_max_cycles == 0
        {
            return Err(Error::domain(
                "Newton settings need positive tolerances and limits",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct NewtonOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// Final `‖G(x)‖∞`.
    pub residual: f64,
    pub history: Vec<f64>,
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn two_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// A restart cycle that keeps more than this fraction of the residual doubles
/// the restart length (up to the system size).
const STAGNATION_FACTOR: f64 = 0.5;

/// `G(θ, x)`, with the full problem at `θ = 1`.
pub type ParametrizedResidual<'a> = dyn Fn(f64, &[f64], &mut [f64]) + 'a;

const MAX_BACKTRACKS: usize = 20;
const ARMIJO: f64 = 1e-4;

/// Restarted GMRES for `J d = rhs` with a zero initial guess. Returns the
/// approximate solution and its relative residual.
pub fn gmres(
    matvec: &mut dyn FnMut(&[f64], &mut [f64]),
    rhs: &[f64],
    mut restart: usize,
    tol: f64,
    max_cycles: usize,
) -> (Vec<f64>, f64) {
    let n = rhs.len();
    let bnorm = two_norm(rhs);
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return (x, 0.0);
    }
    let mut r = rhs.to_vec();
    let mut rel = 1.0;
    let mut w = vec![0.0; n];
    for _ in 0..max_cycles {
        let beta = two_norm(&r);
        rel = beta / bnorm;
        if rel <= tol {
            break;
        }
        let m = restart.min(n);
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
        basis.push(r.iter().map(|v| v / beta).collect());
        // Hessenberg columns after Givens rotation
        let mut h = vec![vec![0.0; m + 1]; m];
        let mut cs = vec![0.0; m];
        let mut sn = vec![0.0; m];
        let mut g = vec![0.0; m + 1];
        g[0] = beta;
        let mut used = 0;
        for j in 0..m {
            matvec(&basis[j], &mut w);
            for i in 0..=j {
                let hij: f64 = w.iter().zip(&basis[i]).map(|(a, b)| a * b).sum();
                h[j][i] = hij;
                for (wk, bk) in w.iter_mut().zip(&basis[i]) {
                    *wk -= hij * bk;
                }
            }
            let hnext = two_norm(&w);
            h[j][j + 1] = hnext;
            for i in 0..j {
                let t = cs[i] * h[j][i] + sn[i] * h[j][i + 1];
                h[j][i + 1] = -sn[i] * h[j][i] + cs[i] * h[j][i + 1];
                h[j][i] = t;
            }
            let denom = h[j][j].hypot(h[j][j + 1]);
            if denom == 0.0 {
                used = j;
                break;
            }
            cs[j] = h[j][j] / denom;
            sn[j] = h[j][j + 1] / denom;
            h[j][j] = denom;
            h[j][j + 1] = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] *= cs[j];
            used = j + 1;
            rel = g[j + 1].abs() / bnorm;
            if rel <= tol || hnext == 0.0 {
                break;
            }
            basis.push(w.iter().map(|v| v / hnext).collect());
        }
        // back substitution
        let mut y = vec![0.0; used];
        for i in (0..used).rev() {
            let mut acc = g[i];
            for k in i + 1..used {
                acc -= h[k][i] * y[k];
            }
            y[i] = acc / h[i][i];
        }
        for (k, yk) in y.iter().enumerate() {
            for (xi, bi) in x.iter_mut().zip(&basis[k]) {
                *xi += yk * bi;
            }
        }
        // true residual for the next cycle
        matvec(&x, &mut w);
        for i in 0..n {
            r[i] = rhs[i] - w[i];
        }
        let before = rel;
        rel = two_norm(&r) / bnorm;
        if rel <= tol {
            break;
        }
        if rel > STAGNATION_FACTOR * before {
            restart = (2 * restart).min(n);
        }
    }
    (x, rel)
}

/// Solves `G(x) = 0` from `guess` by inexact Newton iteration.
///
/// Jacobian-vector products use central differences with step
/// `sqrt(eps) (1 + ‖x‖₂)` along the normalized direction. Each step is
/// damped by backtracking when it fails to reduce the residual.
pub fn newton_krylov_solve(
    residual: &dyn Fn(&[f64], &mut [f64]),
    guess: Vec<f64>,
    settings: &NewtonSettings,
) -> Result<NewtonOutcome> {
    settings.validate()?;
    let n = guess.len();
    let mut x = guess;
    let mut g = vec![0.0; n];
    residual(&x, &mut g);
    let g0 = inf_norm(&g);
    let target = settings.abs_tol + settings.rel_tol * g0;
    let mut history = vec![g0];
    let mut gnorm = g0;
    let mut iterations = 0;
    let sqrt_eps = f64::EPSILON.sqrt();

    let mut xp = vec![0.0; n];
    let mut gp = vec![0.0; n];
    let mut gm = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut gtrial = vec![0.0; n];

    while gnorm > target {
        if iterations >= settings.max_newton || !gnorm.is_finite() {
            return Err(Error::NewtonFailure {
                iterations,
                residual: gnorm,
                history,
            });
        }
        iterations += 1;
        let h = sqrt_eps * (1.0 + two_norm(&x));
        let x_ref = &x;
        let mut matvec = |v: &[f64], out: &mut [f64]| {
            let vn = two_norm(v);
            if vn == 0.0 {
                out.fill(0.0);
                return;
            }
            let step = h / vn;
            for i in 0..n {
                xp[i] = x_ref[i] + step * v[i];
            }
            residual(&xp, &mut gp);
            for i in 0..n {
                xp[i] = x_ref[i] - step * v[i];
            }
            residual(&xp, &mut gm);
            for i in 0..n {
                out[i] = (gp[i] - gm[i]) / (2.0 * step);
            }
        };
        let rhs: Vec<f64> = g.iter().map(|v| -v).collect();
        let (d, _) = gmres(
            &mut matvec,
            &rhs,
            settings.krylov_restart,
            settings.krylov_tol,
            settings.krylov_max_cycles,
        );

        // Armijo backtracking on the Euclidean merit, for which the Newton
        // direction is a descent direction
        let merit = two_norm(&g);
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..MAX_BACKTRACKS {
            for i in 0..n {
                trial[i] = x[i] + lambda * d[i];
            }
            residual(&trial, &mut gtrial);
            let tn = two_norm(&gtrial);
            if tn.is_finite() && tn <= (1.0 - ARMIJO * lambda) * merit {
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            return Err(Error::NewtonFailure {
                iterations,
                residual: gnorm,
                history,
            });
        }
        std::mem::swap(&mut x, &mut trial);
        std::mem::swap(&mut g, &mut gtrial);
        gnorm = inf_norm(&g);
        history.push(gnorm);
    }
    Ok(NewtonOutcome {
        x,
        iterations,
        residual: gnorm,
        history,
    })
}

/// Smallest continuation increment before giving up.
const MIN_CONTINUATION_STEP: f64 = 1.0 / 1024.0;

/// Solves `G(1, x) = 0` for a family `G(θ, ·)` with `G(0, guess) = 0`.
///
/// Newton is tried directly at `θ = 1` first. If that fails, `θ` is raised
/// from zero in adaptive increments, each solve starting from the previous
/// solution. Iteration counts are summed over all solves.
pub fn newton_continuation_solve(
    residual: &ParametrizedResidual<'_>,
    guess: Vec<f64>,
    settings: &NewtonSettings,
) -> Result<NewtonOutcome> {
    let direct = newton_krylov_solve(&|x, out| residual(1.0, x, out), guess.clone(), settings);
    let (mut iterations, mut history) = match direct {
        Ok(out) => return Ok(out),
        Err(Error::NewtonFailure {
            iterations,
            history,
            ..
        }) => (iterations, history),
        Err(e) => return Err(e),
    };
    let mut theta = 0.0;
    let mut step: f64 = 0.25;
    let mut x = guess;
    loop {
        let target = (theta + step).min(1.0);
        match newton_krylov_solve(&|y, out| residual(target, y, out), x.clone(), settings) {
            Ok(out) => {
                iterations += out.iterations;
                history.extend_from_slice(&out.history);
                x = out.x;
                theta = target;
                if theta >= 1.0 {
                    return Ok(NewtonOutcome {
                        x,
                        iterations,
                        residual: out.residual,
                        history,
                    });
                }
                step *= 2.0;
            }
            Err(Error::NewtonFailure {
                iterations: its,
                residual: res,
                history: h,
            }) => {
                iterations += its;
                history.extend_from_slice(&h);
                step *= 0.5;
                if step < MIN_CONTINUATION_STEP {
                    return Err(Error::NewtonFailure {
                        iterations,
                        residual: res,
                        history,
                    });
                }
            }
            Err(e) => return Err(e),
        }
    }
}
