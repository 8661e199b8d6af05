use super::newton::NewtonSettings;
use super::stepper::{HistoryEntry, StepStats, Stepper};
use super::trace::{MonitorTrace, TraceRecord};
use crate::error::{Error, Result};
use crate::methods::{catalog, Method};
use crate::spatial::{max_norm, tv_seminorm, GridFunction, SemiDiscretization};

/// Family parameter used for multistep startup steps.
pub const STARTUP_FAMILY_R: f64 = 8.0;

pub struct RunConfig<'a> {
    pub method: &'a Method,
    pub semi: &'a dyn SemiDiscretization,
    /// Step size as a multiple of the forward-Euler bound of `u0`.
    pub cfl: f64,
    pub t_end: f64,
    pub u0: GridFunction,
    pub newton: NewtonSettings,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub solution: GridFunction,
    pub trace: MonitorTrace,
    pub dt: f64,
}

/// Step sizes: `count - 1` full steps of `dt` and a final step landing
/// exactly on `t_end`.
pub fn step_schedule(dt: f64, t_end: f64) -> (usize, f64) {
    let count = ((t_end / dt) - 1e-9).ceil().max(1.0) as usize;
    let last = t_end - (count - 1) as f64 * dt;
    (count, last)
}

fn record(step: usize, t: f64, u: &GridFunction, stats: StepStats) -> TraceRecord {
    TraceRecord {
        step,
        t,
        tv: tv_seminorm(u),
        maxnorm: max_norm(u),
        newton_iters: stats.newton_iterations,
        residual: stats.residual,
    }
}

/// Integrates from `t = 0` to `t_end` with constant `dt = cfl · dt_FE(u0)`,
/// shortening only the final step.
///
/// Multistep methods take their first `k - 1` steps, and a shortened final
/// step, with the downwind family at `r = 8`.
pub fn run(cfg: RunConfig) -> Result<RunOutput> {
    if !(cfg.t_end > 0.0) || !cfg.t_end.is_finite() {
        return Err(Error::domain("t_end must be positive"));
    }
    if !(cfg.cfl > 0.0) || !cfg.cfl.is_finite() {
        return Err(Error::domain("cfl must be positive"));
    }
    let semi = cfg.semi;
    if cfg.u0.values().len() != semi.size() {
        return Err(Error::Dimension(
            "initial data does not match the operator".into(),
        ));
    }
    let dt = cfg.cfl * semi.dt_fe(cfg.u0.values());
    let (count, last) = step_schedule(dt, cfg.t_end);
    let grid = *cfg.u0.grid();

    let mut trace = MonitorTrace::default();
    trace.push(record(0, 0.0, &cfg.u0, StepStats::default()));

    let startup_method = Method::RungeKutta(catalog::downwind_family(STARTUP_FAMILY_R)?);
    let mut stepper = Stepper::new(cfg.method, semi, cfg.newton)?;
    let mut startup = Stepper::new(&startup_method, semi, cfg.newton)?;

    let mut u = cfg.u0.clone();
    let mut history: Vec<HistoryEntry> = Vec::new();
    let steps_needed = match cfg.method {
        Method::Multistep(m) => m.steps(),
        Method::RungeKutta(_) => 0,
    };
    if steps_needed > 0 {
        history.push(HistoryEntry::new(semi, u.clone()));
    }

    for step in 1..=count {
        let h = if step == count { last } else { dt };
        let t = if step == count {
            cfg.t_end
        } else {
            step as f64 * dt
        };
        let short = (h - dt).abs() > 1e-12 * dt;
        let (next, stats) = match cfg.method {
            Method::RungeKutta(_) => stepper.rk_step(u.values(), h)?,
            Method::Multistep(_) => {
                if history.len() < steps_needed || short {
                    startup.rk_step(u.values(), h)?
                } else {
                    stepper.lmm_step(&history, h)?
                }
            }
        };
        u = GridFunction::new(grid, next)?;
        if steps_needed > 0 {
            history.push(HistoryEntry::new(semi, u.clone()));
            if history.len() > steps_needed {
                history.remove(0);
            }
        }
        trace.push(record(step, t, &u, stats));
    }
    Ok(RunOutput {
        solution: u,
        trace,
        dt,
    })
}
