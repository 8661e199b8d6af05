//! The three test problems (square-wave advection, sine advection with WENO5,
//! Burgers shock formation) and the comparisons between backward Euler, the
//! implicit trapezoidal rule and the downwind family.

use std::fmt::{self, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::fmt17;
use crate::methods::{catalog, BuiltinMethod, Method};
use crate::solver::{run, MonitorTrace, NewtonSettings, RunConfig};
use crate::spatial::{
    max_norm, sine_wave, square_wave, FirstOrderAdvection, GridFunction, PeriodicGrid,
    SemiDiscretization, SpatialScheme, Weno5Advection, Weno5Burgers,
};

/// Family parameter used throughout the experiments.
pub const DEFAULT_R: f64 = 8.0;
/// Latest time at which the Burgers reference is supported.
pub const BURGERS_T_END: f64 = 0.16;
/// Grid refinement factor of the Burgers reference.
pub const REFERENCE_REFINEMENT: usize = 8;
/// CFL number of the explicit reference integrator.
pub const REFERENCE_CFL: f64 = 0.4;
/// Half-width of the window around the Burgers shock used for comparisons.
pub const SHOCK_WINDOW: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Problem {
    AdvectionSquare,
    AdvectionSine,
    Burgers,
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Problem::AdvectionSquare => "advection-square",
            Problem::AdvectionSine => "advection-sine",
            Problem::Burgers => "burgers",
        })
    }
}

impl FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "advection-square" => Ok(Problem::AdvectionSquare),
            "advection-sine" => Ok(Problem::AdvectionSine),
            "burgers" => Ok(Problem::Burgers),
            _ => Err(Error::domain(format!("unknown problem {s:?}"))),
        }
    }
}

impl Problem {
    pub fn initial_value(&self, x: f64) -> f64 {
        match self {
            Problem::AdvectionSquare => square_wave(x),
            Problem::AdvectionSine | Problem::Burgers => sine_wave(x),
        }
    }

    pub fn initial_data(&self, grid: &PeriodicGrid) -> GridFunction {
        grid.sample(|x| self.initial_value(x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Spatial {
    FirstOrder,
    Weno5,
}

impl From<Spatial> for SpatialScheme {
    fn from(s: Spatial) -> Self {
        match s {
            Spatial::FirstOrder => SpatialScheme::FirstOrder,
            Spatial::Weno5 => SpatialScheme::Weno5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub problem: Problem,
    pub n: usize,
    pub cfl: f64,
    pub t_end: f64,
    /// Built-in method names, in output order.
    pub methods: Vec<String>,
    pub spatial: Spatial,
    pub r: f64,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n < 5 {
            return Err(Error::domain(format!(
                "n must be at least 5, got {}",
                self.n
            )));
        }
        if !(self.cfl > 0.0 && self.cfl.is_finite()) {
            return Err(Error::domain(format!(
                "cfl must be positive, got {}",
                self.cfl
            )));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::domain(format!(
                "t_end must be positive, got {}",
                self.t_end
            )));
        }
        if self.problem == Problem::Burgers {
            if self.spatial != Spatial::Weno5 {
                return Err(Error::domain("Burgers runs use the WENO5 operators"));
            }
            if self.t_end > BURGERS_T_END + 1e-12 {
                return Err(Error::domain(format!(
                    "Burgers reference supports t_end <= {BURGERS_T_END}, got {}",
                    self.t_end
                )));
            }
        }
        if self.methods.is_empty() {
            return Err(Error::domain("no methods selected"));
        }
        for m in &self.methods {
            m.parse::<BuiltinMethod>()?;
        }
        if !(self.r > 2.0 + 2f64.sqrt()) {
            return Err(Error::domain(format!(
                "r must exceed 2 + sqrt(2), got {}",
                self.r
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec is serializable")
    }
}

/// Backward Euler, the implicit trapezoidal rule and the family at `r`.
pub fn comparator_names(r: f64) -> Vec<String> {
    vec![
        BuiltinMethod::BackwardEuler.to_string(),
        BuiltinMethod::Trapezoidal.to_string(),
        BuiltinMethod::DownwindFamily(r).to_string(),
    ]
}

pub fn square_wave_spec(cfl: f64) -> ExperimentSpec {
    ExperimentSpec {
        problem: Problem::AdvectionSquare,
        n: 128,
        cfl,
        t_end: 1.0,
        methods: comparator_names(DEFAULT_R),
        spatial: Spatial::FirstOrder,
        r: DEFAULT_R,
    }
}

pub fn sine_spec(cfl: f64, n: usize) -> ExperimentSpec {
    ExperimentSpec {
        problem: Problem::AdvectionSine,
        n,
        cfl,
        t_end: 1.0,
        methods: comparator_names(DEFAULT_R),
        spatial: Spatial::Weno5,
        r: DEFAULT_R,
    }
}

pub fn burgers_spec(cfl: f64, n: usize) -> ExperimentSpec {
    ExperimentSpec {
        problem: Problem::Burgers,
        n,
        cfl,
        t_end: BURGERS_T_END,
        methods: comparator_names(DEFAULT_R),
        spatial: Spatial::Weno5,
        r: DEFAULT_R,
    }
}

pub fn build_semi(
    problem: Problem,
    spatial: Spatial,
    grid: PeriodicGrid,
) -> Result<Box<dyn SemiDiscretization>> {
    Ok(match (problem, spatial) {
        (Problem::Burgers, Spatial::Weno5) => Box::new(Weno5Burgers::new(grid)?),
        (Problem::Burgers, Spatial::FirstOrder) => {
            return Err(Error::domain("Burgers runs use the WENO5 operators"))
        }
        (_, Spatial::FirstOrder) => Box::new(FirstOrderAdvection { grid }),
        (_, Spatial::Weno5) => Box::new(Weno5Advection::new(grid)?),
    })
}

/// Exact periodic shift for advection; a fine-grid SSPRK(3,3) + WENO5 run,
/// subsampled onto the `n`-point grid, for Burgers.
pub fn reference_solution(problem: Problem, n: usize, t_end: f64) -> Result<GridFunction> {
    reference_with_refinement(problem, n, t_end, REFERENCE_REFINEMENT)
}

pub fn reference_with_refinement(
    problem: Problem,
    n: usize,
    t_end: f64,
    refinement: usize,
) -> Result<GridFunction> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::domain("t_end must be positive"));
    }
    let grid = PeriodicGrid::new(n)?;
    match problem {
        Problem::AdvectionSquare | Problem::AdvectionSine => {
            Ok(grid.sample(|x| problem.initial_value((x - t_end).rem_euclid(1.0))))
        }
        Problem::Burgers => {
            if t_end > BURGERS_T_END + 1e-12 {
                return Err(Error::domain(format!(
                    "Burgers reference supports t_end <= {BURGERS_T_END}"
                )));
            }
            if refinement == 0 {
                return Err(Error::domain("refinement must be positive"));
            }
            let fine = PeriodicGrid::new(n * refinement)?;
            let semi = Weno5Burgers::new(fine)?;
            let method = Method::RungeKutta(catalog::ssprk33());
            let out = run(RunConfig {
                method: &method,
                semi: &semi,
                cfl: REFERENCE_CFL,
                t_end,
                u0: Problem::Burgers.initial_data(&fine),
                newton: NewtonSettings::default(),
            })?;
            let values = out.solution.values();
            GridFunction::new(grid, (0..n).map(|i| values[i * refinement]).collect())
        }
    }
}

/// One method's run within an experiment.
#[derive(Debug, Clone)]
pub struct MethodRun {
    pub method: String,
    pub cfl: f64,
    pub solution: GridFunction,
    pub trace: MonitorTrace,
    /// Max-norm error against the reference.
    pub error: f64,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub spec: ExperimentSpec,
    pub reference: GridFunction,
    pub runs: Vec<MethodRun>,
}

impl ExperimentResult {
    pub fn run_for(&self, method: &str) -> Option<&MethodRun> {
        self.runs.iter().find(|r| r.method == method)
    }
}

fn run_method(
    spec: &ExperimentSpec,
    name: &str,
    cfl: f64,
    reference: &GridFunction,
) -> Result<MethodRun> {
    let grid = PeriodicGrid::new(spec.n)?;
    let semi = build_semi(spec.problem, spec.spatial, grid)?;
    let method = Method::resolve(name)?;
    let out = run(RunConfig {
        method: &method,
        semi: semi.as_ref(),
        cfl,
        t_end: spec.t_end,
        u0: spec.problem.initial_data(&grid),
        newton: NewtonSettings::default(),
    })?;
    let error = max_norm(&out.solution.difference(reference));
    Ok(MethodRun {
        method: name.to_string(),
        cfl,
        solution: out.solution,
        trace: out.trace,
        error,
    })
}

/// Runs independent jobs on up to `jobs` threads, keeping input order.
pub fn run_jobs<T, R, F>(items: &[T], jobs: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let jobs = jobs.max(1).min(items.len().max(1));
    if jobs == 1 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(jobs);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| {
                let f = &f;
                scope.spawn(move || part.iter().map(f).collect::<Vec<R>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("experiment worker panicked"))
            .collect()
    })
}

/// Runs every method of `spec` against the problem's reference.
pub fn run_experiment(spec: &ExperimentSpec, jobs: usize) -> Result<ExperimentResult> {
    spec.validate()?;
    let reference = reference_solution(spec.problem, spec.n, spec.t_end)?;
    let runs = run_jobs(&spec.methods, jobs, |name| {
        run_method(spec, name, spec.cfl, &reference)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentResult {
        spec: spec.clone(),
        reference,
        runs,
    })
}

/// Square-wave advection with first-order operators on 128 points to `t = 1`.
pub fn run_square_wave(cfl: f64) -> Result<ExperimentResult> {
    run_experiment(&square_wave_spec(cfl), 1)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    /// Max-norm error per method.
    pub errors: Vec<f64>,
    /// Observed order per method against the previous row.
    pub orders: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub methods: Vec<String>,
    pub cfl: f64,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    pub fn errors_of(&self, method: &str) -> Option<Vec<f64>> {
        let j = self.methods.iter().position(|m| m == method)?;
        Some(self.rows.iter().map(|r| r.errors[j]).collect())
    }

    /// Orders from the second row on.
    pub fn orders_of(&self, method: &str) -> Option<Vec<f64>> {
        let j = self.methods.iter().position(|m| m == method)?;
        Some(
            self.rows
                .iter()
                .filter_map(|r| r.orders.as_ref().map(|o| o[j]))
                .collect(),
        )
    }

    /// Header `n,<method>_error,<method>_order,...`; orders are empty on the
    /// first row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n");
        for m in &self.methods {
            write!(out, ",{m}_error,{m}_order").unwrap();
        }
        out.push('\n');
        for row in &self.rows {
            write!(out, "{}", row.n).unwrap();
            for (j, e) in row.errors.iter().enumerate() {
                let order = row.orders.as_ref().map(|o| fmt17(o[j])).unwrap_or_default();
                write!(out, ",{},{}", fmt17(*e), order).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

pub fn observed_order(coarse: (usize, f64), fine: (usize, f64)) -> f64 {
    (coarse.1 / fine.1).ln() / (fine.0 as f64 / coarse.0 as f64).ln()
}

/// WENO5 sine advection to `t = 1` for each grid size.
pub fn run_convergence_table(cfl: f64, sizes: &[usize], jobs: usize) -> Result<ConvergenceTable> {
    run_convergence(
        &sine_spec(cfl, sizes.first().copied().unwrap_or(0)),
        sizes,
        jobs,
    )
}

/// Runs `base` at each grid size; `base.n` is ignored.
pub fn run_convergence(
    base: &ExperimentSpec,
    sizes: &[usize],
    jobs: usize,
) -> Result<ConvergenceTable> {
    if sizes.is_empty() {
        return Err(Error::domain("no grid sizes given"));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("grid sizes must be strictly ascending"));
    }
    let specs: Vec<ExperimentSpec> = sizes
        .iter()
        .map(|&n| ExperimentSpec { n, ..base.clone() })
        .collect();
    for s in &specs {
        s.validate()?;
    }
    let methods = base.methods.clone();
    let tasks: Vec<(usize, usize)> = (0..specs.len())
        .flat_map(|i| (0..methods.len()).map(move |j| (i, j)))
        .collect();
    let errors = run_jobs(&tasks, jobs, |&(i, j)| {
        let spec = &specs[i];
        let reference = reference_solution(spec.problem, spec.n, spec.t_end)?;
        run_method(spec, &methods[j], spec.cfl, &reference).map(|r| r.error)
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;

    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(sizes.len());
    for (i, &n) in sizes.iter().enumerate() {
        let errs = errors[i * methods.len()..(i + 1) * methods.len()].to_vec();
        let orders = rows.last().map(|prev: &ConvergenceRow| {
            errs.iter()
                .zip(&prev.errors)
                .map(|(&e, &p)| observed_order((prev.n, p), (n, e)))
                .collect()
        });
        rows.push(ConvergenceRow {
            n,
            errors: errs,
            orders,
        });
    }
    Ok(ConvergenceTable {
        methods,
        cfl: base.cfl,
        rows,
    })
}

#[derive(Debug, Clone)]
pub struct BurgersResult {
    pub main: ExperimentResult,
    /// The family at the second CFL number.
    pub second: MethodRun,
}

impl BurgersResult {
    /// Relative max-norm difference between the two family runs within
    /// [`SHOCK_WINDOW`] of the shock.
    pub fn cfl_sensitivity(&self) -> f64 {
        let family = BuiltinMethod::DownwindFamily(self.main.spec.r).to_string();
        let Some(first) = self.main.run_for(&family).map(|r| &r.solution) else {
            return f64::NAN;
        };
        let second = &self.second.solution;
        let (diff, scale) = shock_window(first.grid())
            .map(|i| {
                let a = first.values()[i];
                (a - second.values()[i], a)
            })
            .fold((0.0f64, 0.0f64), |(d, s), (di, a)| {
                (d.max(di.abs()), s.max(a.abs()))
            });
        diff / scale
    }
}

/// Node indices within [`SHOCK_WINDOW`] of `x = 1/2`.
pub fn shock_window(grid: &PeriodicGrid) -> impl Iterator<Item = usize> + '_ {
    (0..grid.len()).filter(|&i| (grid.node(i) - 0.5).abs() <= SHOCK_WINDOW)
}

/// Max-norm error restricted to the shock window.
pub fn shock_window_error(u: &GridFunction, reference: &GridFunction) -> f64 {
    shock_window(u.grid())
        .map(|i| (u.values()[i] - reference.values()[i]).abs())
        .fold(0.0, f64::max)
}

/// Burgers to `t = 0.16` with the three comparators at `cfl`, plus the family
/// at `second_cfl`.
pub fn run_burgers(cfl: f64, n: usize, second_cfl: f64, jobs: usize) -> Result<BurgersResult> {
    run_burgers_spec(&burgers_spec(cfl, n), second_cfl, jobs)
}

/// Runs every method of a Burgers `spec` plus the family (at `spec.r`) at
/// `second_cfl`.
pub fn run_burgers_spec(
    spec: &ExperimentSpec,
    second_cfl: f64,
    jobs: usize,
) -> Result<BurgersResult> {
    if spec.problem != Problem::Burgers {
        return Err(Error::domain("not a Burgers experiment"));
    }
    if spec.n < 64 {
        return Err(Error::domain(format!(
            "Burgers runs need n >= 64, got {}",
            spec.n
        )));
    }
    if !(second_cfl > 0.0 && second_cfl.is_finite()) {
        return Err(Error::domain("second cfl must be positive"));
    }
    spec.validate()?;
    let reference = reference_solution(spec.problem, spec.n, spec.t_end)?;
    let family = BuiltinMethod::DownwindFamily(spec.r).to_string();
    let mut tasks: Vec<(String, f64)> =
        spec.methods.iter().map(|m| (m.clone(), spec.cfl)).collect();
    tasks.push((family, second_cfl));
    let mut runs = run_jobs(&tasks, jobs, |(name, c)| {
        run_method(spec, name, *c, &reference)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let second = runs.pop().expect("second run was queued");
    Ok(BurgersResult {
        main: ExperimentResult {
            spec: spec.clone(),
            reference,
            runs,
        },
        second,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DissipationEstimate {
    /// `r · dx^q · dt`.
    pub magnitude: f64,
    /// `magnitude / dt²`.
    pub ratio: f64,
    /// True when the diffusive term is within a factor of ten of the
    /// second-order term.
    pub polluted: bool,
}

pub const POLLUTION_RATIO: f64 = 0.1;

/// Size of the artificial diffusion introduced when `F̃ ≈ -F` holds only to
/// order `q` in space.
pub fn dissipation_probe(r: f64, q: u32, dx: f64, dt: f64) -> Result<DissipationEstimate> {
    if !(r > 0.0 && dx > 0.0 && dt > 0.0) {
        return Err(Error::domain("dissipation probe needs positive inputs"));
    }
    let magnitude = r * dx.powi(q as i32) * dt;
    let ratio = magnitude / (dt * dt);
    Ok(DissipationEstimate {
        magnitude,
        ratio,
        polluted: ratio >= POLLUTION_RATIO,
    })
}
