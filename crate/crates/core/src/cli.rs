//! Command-line front end. Every command validates its arguments before doing
//! any numerical work.
//!
//! Exit codes: 0 success, 2 invalid input, 3 solver failure, 4 I/O failure.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::experiments::{
    self, comparator_names, BurgersResult, ConvergenceTable, ExperimentResult, ExperimentSpec,
    Problem, Spatial, BURGERS_T_END, DEFAULT_R,
};
use crate::io;
use crate::methods::{
    evaluate_psi, lmm_order_residuals, observed_order, rk_order_residuals, stability_function,
    BuiltinMethod, DownwindLmm, DownwindTableau, Method, RationalStabilityFunction,
};
use crate::ssp::{
    lmm_downwind_ssp_coefficient, optimal_lmm, rk_certify, rk_feasible_at, CertificationReport,
    DEFAULT_TOL,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// Maps a library error to the process exit code.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io { .. } => EXIT_IO,
        Error::SingularMatrix { .. }
        | Error::NewtonFailure { .. }
        | Error::BracketOverflow { .. }
        | Error::Cycling(_)
        | Error::NegativeGamma { .. }
        | Error::Pole { .. } => EXIT_SOLVER,
        _ => EXIT_VALIDATION,
    }
}

#[derive(Debug, Parser)]
#[command(name = "dwssp", version, about = "Downwind SSP time integration")]
pub struct Cli {
    /// Progress messages on stderr (repeat for more).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Order conditions, stability function and A-stability sample of a method.
    Analyze {
        /// Built-in name (forward-euler, backward-euler, trapezoidal, ssprk22,
        /// ssprk33, dw-family:R) or a JSON method file.
        method: String,
        /// Directory for report.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Downwind SSP coefficient with a Shu–Osher certificate.
    Certify {
        method: String,
        /// Bisection tolerance.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Only test feasibility at this value.
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimal downwind multistep method of given steps and order.
    OptimalLmm {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        p: usize,
        /// Search explicit methods (default: implicit).
        #[arg(long)]
        explicit: bool,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Square-wave advection with the three comparators.
    Advect {
        #[command(flatten)]
        common: ExperimentArgs,
        #[arg(long, default_value_t = 128)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        t_end: f64,
        #[arg(long, value_enum, default_value_t = SpatialArg::First)]
        spatial: SpatialArg,
    },
    /// Sine-wave convergence table.
    Converge {
        #[command(flatten)]
        common: ExperimentArgs,
        /// Comma-separated, strictly ascending grid sizes.
        #[arg(long, value_delimiter = ',', default_value = "32,64,128,256")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 1.0)]
        t_end: f64,
        #[arg(long, value_enum, default_value_t = SpatialArg::Weno5)]
        spatial: SpatialArg,
    },
    /// Burgers shock formation against a fine-grid reference.
    Burgers {
        #[command(flatten)]
        common: ExperimentArgs,
        #[arg(long, default_value_t = 512)]
        n: usize,
        #[arg(long, default_value_t = BURGERS_T_END)]
        t_end: f64,
        /// CFL number of the extra family run (default: half of --cfl).
        #[arg(long)]
        second_cfl: Option<f64>,
        #[arg(long, value_enum, default_value_t = SpatialArg::Weno5)]
        spatial: SpatialArg,
    },
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long, default_value_t = 8.0)]
    pub cfl: f64,
    /// Family parameter of the downwind comparator.
    #[arg(long, default_value_t = DEFAULT_R)]
    pub r: f64,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Concurrent runs.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpatialArg {
    First,
    Weno5,
}

impl From<SpatialArg> for Spatial {
    fn from(s: SpatialArg) -> Self {
        match s {
            SpatialArg::First => Spatial::FirstOrder,
            SpatialArg::Weno5 => Spatial::Weno5,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub method: String,
    pub kind: &'static str,
    pub stages_or_steps: usize,
    pub explicit: bool,
    /// Whether any downwind coefficient is nonzero.
    pub downwind: bool,
    pub order: usize,
    pub order_residuals: Vec<f64>,
    pub stability_function: Option<RationalStabilityFunction>,
    /// `|ψ(∞)|`; `null` for polynomial stability functions.
    pub psi_at_infinity: Option<f64>,
    pub a_stable_sample: Option<bool>,
}

/// Samples `|ψ| <= 1` on the imaginary axis and in the left half-plane.
pub fn a_stable_sample(f: &RationalStabilityFunction) -> bool {
    let radii = (0..=80).map(|i| 10f64.powf(-3.0 + 0.1 * i as f64));
    for rho in radii {
        for k in 0..=32 {
            let theta = std::f64::consts::FRAC_PI_2 + std::f64::consts::PI * k as f64 / 32.0;
            let z = Complex64::from_polar(rho, theta);
            match evaluate_psi(f, z) {
                Ok(v) if v.norm() <= 1.0 + 1e-10 => {}
                _ => return false,
            }
        }
    }
    true
}

fn analyze_rk(name: &str, t: &DownwindTableau) -> Result<AnalysisReport> {
    let order = observed_order(t, 1e-10);
    let psi = stability_function(t);
    let inf = psi.limit_at_infinity();
    Ok(AnalysisReport {
        method: name.to_string(),
        kind: "runge-kutta",
        stages_or_steps: t.stages(),
        explicit: t.is_explicit(),
        downwind: !t.is_classical(),
        order,
        order_residuals: rk_order_residuals(t, 3)?,
        a_stable_sample: Some(a_stable_sample(&psi)),
        psi_at_infinity: inf.is_finite().then_some(inf),
        stability_function: Some(psi),
    })
}

fn analyze_lmm(name: &str, m: &DownwindLmm) -> AnalysisReport {
    let residuals = lmm_order_residuals(m, m.steps() + 1);
    let order = residuals
        .iter()
        .take_while(|r| r.abs() <= 1e-10)
        .count()
        .saturating_sub(1);
    AnalysisReport {
        method: name.to_string(),
        kind: "multistep",
        stages_or_steps: m.steps(),
        explicit: m.is_explicit(),
        downwind: m.betatilde().iter().any(|&b| b != 0.0),
        order,
        order_residuals: residuals,
        stability_function: None,
        psi_at_infinity: None,
        a_stable_sample: None,
    }
}

pub fn cmd_analyze(spec: &str) -> Result<AnalysisReport> {
    match Method::resolve(spec)? {
        Method::RungeKutta(t) => analyze_rk(spec, &t),
        Method::Multistep(m) => Ok(analyze_lmm(spec, &m)),
    }
}

/// Certification, or a feasibility query at `r` when given.
pub fn cmd_certify(spec: &str, tol: f64, r: Option<f64>) -> Result<CertificationReport> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if let Some(r) = r {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::domain(format!("r must be nonnegative, got {r}")));
        }
    }
    let method = Method::resolve(spec)?;
    let family_r = match spec.parse::<BuiltinMethod>() {
        Ok(BuiltinMethod::DownwindFamily(r)) => Some(r),
        _ => None,
    };
    let mut report = match (&method, r) {
        (Method::RungeKutta(t), Some(r)) => {
            let res = rk_feasible_at(t, r)?;
            CertificationReport {
                method: spec.to_string(),
                r_queried: r,
                feasible: res.feasible,
                certificate: res.certificate,
                ctilde: None,
                tolerance: tol,
                family_check: None,
            }
        }
        (Method::RungeKutta(t), None) => match rk_certify(t, tol) {
            Ok(c) => CertificationReport {
                method: spec.to_string(),
                r_queried: c.ctilde,
                feasible: true,
                certificate: Some(c.certificate),
                ctilde: Some(c.ctilde),
                tolerance: tol,
                family_check: None,
            },
            Err(Error::BracketOverflow { cap }) => CertificationReport {
                method: spec.to_string(),
                r_queried: cap,
                feasible: true,
                certificate: None,
                ctilde: None,
                tolerance: tol,
                family_check: None,
            },
            Err(e) => return Err(e),
        },
        (Method::Multistep(m), r) => {
            let c = lmm_downwind_ssp_coefficient(m);
            let r_queried = r.unwrap_or(c);
            CertificationReport {
                method: spec.to_string(),
                r_queried,
                feasible: r_queried <= c,
                certificate: None,
                ctilde: c.is_finite().then_some(c),
                tolerance: tol,
                family_check: None,
            }
        }
    };
    if let (Some(fr), Some(c)) = (family_r, report.ctilde) {
        report.family_check = Some((c - fr).abs());
    }
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct OptimalLmmReport {
    pub k: usize,
    pub p: usize,
    pub implicit: bool,
    /// `null` when unbounded.
    #[serde(rename = "Ctilde")]
    pub ctilde: Option<f64>,
    pub method: DownwindLmm,
}

pub fn cmd_optimal_lmm(k: usize, p: usize, implicit: bool, tol: f64) -> Result<OptimalLmmReport> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let (method, c) = optimal_lmm(k, p, implicit, tol)?;
    Ok(OptimalLmmReport {
        k,
        p,
        implicit,
        ctilde: c.is_finite().then_some(c),
        method,
    })
}

/// A validated experiment request.
#[derive(Debug, Clone)]
pub enum ExperimentRequest {
    Advect(ExperimentSpec),
    Converge {
        base: ExperimentSpec,
        sizes: Vec<usize>,
    },
    Burgers {
        spec: ExperimentSpec,
        second_cfl: f64,
    },
}

#[derive(Debug, Clone)]
pub enum ExperimentOutput {
    Advect(ExperimentResult),
    Converge(ConvergenceTable),
    Burgers(BurgersResult),
}

impl ExperimentRequest {
    pub fn validate(&self) -> Result<()> {
        match self {
            ExperimentRequest::Advect(spec) => spec.validate(),
            ExperimentRequest::Converge { base, sizes } => {
                if sizes.is_empty() {
                    return Err(Error::domain("no grid sizes given"));
                }
                if sizes.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::domain("grid sizes must be strictly ascending"));
                }
                for &n in sizes {
                    ExperimentSpec { n, ..base.clone() }.validate()?;
                }
                Ok(())
            }
            ExperimentRequest::Burgers { spec, second_cfl } => {
                if spec.n < 64 {
                    return Err(Error::domain(format!(
                        "Burgers runs need n >= 64, got {}",
                        spec.n
                    )));
                }
                if !(*second_cfl > 0.0 && second_cfl.is_finite()) {
                    return Err(Error::domain("second cfl must be positive"));
                }
                spec.validate()
            }
        }
    }
}

/// Validates, runs and writes an experiment into `out`.
pub fn cmd_experiments(
    req: &ExperimentRequest,
    out: &Path,
    jobs: usize,
) -> Result<ExperimentOutput> {
    req.validate()?;
    if jobs == 0 {
        return Err(Error::domain("jobs must be at least 1"));
    }
    io::prepare_output_dir(out)?;
    match req {
        ExperimentRequest::Advect(spec) => {
            let res = experiments::run_experiment(spec, jobs)?;
            io::write_experiment(out, &res)?;
            Ok(ExperimentOutput::Advect(res))
        }
        ExperimentRequest::Converge { base, sizes } => {
            let table = experiments::run_convergence(base, sizes, jobs)?;
            let finest = ExperimentSpec {
                n: *sizes.last().expect("validated"),
                ..base.clone()
            };
            io::write_convergence(out, &table, &finest.to_json())?;
            Ok(ExperimentOutput::Converge(table))
        }
        ExperimentRequest::Burgers { spec, second_cfl } => {
            let res = experiments::run_burgers_spec(spec, *second_cfl, jobs)?;
            io::write_burgers(out, &res)?;
            Ok(ExperimentOutput::Burgers(res))
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports are serializable")
}

fn emit(json: &str, out: Option<&Path>, file: &str) -> Result<()> {
    if let Some(dir) = out {
        io::prepare_output_dir(dir)?;
        io::write_atomic(&dir.join(file), json)?;
    }
    let mut stdout = std::io::stdout().lock();
    writeln!(stdout, "{json}").map_err(|e| Error::io("<stdout>", e))
}

fn summarize(output: &ExperimentOutput) -> String {
    let mut lines = Vec::new();
    match output {
        ExperimentOutput::Advect(res) => {
            for r in &res.runs {
                lines.push(format!(
                    "{:<16} error {:.6e}  peak max-norm {:.6}  max TV increase {:+.3e}",
                    r.method,
                    r.error,
                    r.trace.peak_maxnorm(),
                    r.trace.max_tv_increase()
                ));
            }
        }
        ExperimentOutput::Converge(table) => {
            lines.push(table.to_csv().trim_end().to_string());
        }
        ExperimentOutput::Burgers(res) => {
            for r in res.main.runs.iter().chain(std::iter::once(&res.second)) {
                lines.push(format!(
                    "{:<16} cfl {:<5} max-norm error {:.6e}  Newton iterations {}",
                    r.method,
                    r.cfl,
                    r.error,
                    r.trace.total_newton_iterations()
                ));
            }
            lines.push(format!(
                "family CFL sensitivity near shock {:.4}",
                res.cfl_sensitivity()
            ));
        }
    }
    lines.join("\n")
}

fn experiment_request(command: &Command) -> Option<(ExperimentRequest, &ExperimentArgs)> {
    let base = |problem, n, t_end, spatial: SpatialArg, common: &ExperimentArgs| ExperimentSpec {
        problem,
        n,
        cfl: common.cfl,
        t_end,
        methods: comparator_names(common.r),
        spatial: spatial.into(),
        r: common.r,
    };
    match command {
        Command::Advect {
            common,
            n,
            t_end,
            spatial,
        } => Some((
            ExperimentRequest::Advect(base(Problem::AdvectionSquare, *n, *t_end, *spatial, common)),
            common,
        )),
        Command::Converge {
            common,
            sizes,
            t_end,
            spatial,
        } => Some((
            ExperimentRequest::Converge {
                base: base(
                    Problem::AdvectionSine,
                    sizes.first().copied().unwrap_or(0),
                    *t_end,
                    *spatial,
                    common,
                ),
                sizes: sizes.clone(),
            },
            common,
        )),
        Command::Burgers {
            common,
            n,
            t_end,
            second_cfl,
            spatial,
        } => Some((
            ExperimentRequest::Burgers {
                spec: base(Problem::Burgers, *n, *t_end, *spatial, common),
                second_cfl: second_cfl.unwrap_or(common.cfl / 2.0),
            },
            common,
        )),
        _ => None,
    }
}

fn dispatch(cli: &Cli) -> Result<()> {
    let verbose = cli.verbose > 0;
    match &cli.command {
        Command::Analyze { method, out } => {
            let report = cmd_analyze(method)?;
            emit(&to_json(&report), out.as_deref(), "report.json")
        }
        Command::Certify {
            method,
            tol,
            r,
            out,
        } => {
            let report = cmd_certify(method, *tol, *r)?;
            emit(&report.to_json(), out.as_deref(), "certificate.json")
        }
        Command::OptimalLmm {
            k,
            p,
            explicit,
            tol,
            out,
        } => {
            let report = cmd_optimal_lmm(*k, *p, !explicit, *tol)?;
            emit(&to_json(&report), out.as_deref(), "optimal_lmm.json")
        }
        command => {
            let (req, common) = experiment_request(command).expect("experiment command");
            req.validate()?;
            if verbose {
                eprintln!("running {:?} into {}", req, common.out.display());
            }
            let output = cmd_experiments(&req, &common.out, common.jobs)?;
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{}", summarize(&output)).map_err(|e| Error::io("<stdout>", e))?;
            if verbose {
                eprintln!("wrote {}", common.out.display());
            }
            Ok(())
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_VALIDATION
            } else {
                EXIT_OK
            };
        }
    };
    match dispatch(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
