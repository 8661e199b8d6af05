//! CSV output helpers. Numbers are written with 17 significant digits and a
//! `.` decimal separator.

use std::fmt::Write;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::experiments::{
    BurgersResult, ConvergenceTable, ExperimentResult, MethodRun, SHOCK_WINDOW,
};
use crate::spatial::GridFunction;

/// Formats with 17 significant digits in scientific notation.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV with header `x,u`.
pub fn grid_function_csv(u: &GridFunction) -> String {
    let mut out = String::from("x,u\n");
    for (x, v) in u.grid().nodes().zip(u.values()) {
        writeln!(out, "{},{}", fmt17(x), fmt17(*v)).unwrap();
    }
    out
}

/// Writes `contents` to a temporary sibling and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("")
    ));
    fs::write(&tmp, contents).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// File-name form of a method name (`dw-family:8` becomes `dw-family-8`).
pub fn slug(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '.' {
                c
            } else {
                '-'
            }
        })
        .collect()
}

/// Creates `dir` and checks that a file can be written into it.
pub fn prepare_output_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let probe = dir.join(".write-probe");
    fs::write(&probe, b"").map_err(|e| Error::io(&probe, e))?;
    fs::remove_file(&probe).map_err(|e| Error::io(&probe, e))
}

fn run_stem(run: &MethodRun, suffix: &str) -> String {
    format!("{}{suffix}", slug(&run.method))
}

fn write_run(dir: &Path, run: &MethodRun, suffix: &str) -> Result<String> {
    let stem = run_stem(run, suffix);
    write_atomic(
        &dir.join(format!("solution_{stem}.csv")),
        &grid_function_csv(&run.solution),
    )?;
    write_atomic(&dir.join(format!("trace_{stem}.csv")), &run.trace.to_csv())?;
    Ok(stem)
}

fn solution_plot(title: &str, curves: &[(String, String)], xrange: Option<(f64, f64)>) -> String {
    let mut gp = String::from("set datafile separator ','\n");
    writeln!(gp, "set key autotitle columnhead").unwrap();
    writeln!(gp, "set title '{title}'").unwrap();
    writeln!(gp, "set xlabel 'x'\nset ylabel 'u'").unwrap();
    if let Some((a, b)) = xrange {
        writeln!(gp, "set xrange [{a}:{b}]").unwrap();
    }
    writeln!(
        gp,
        "set terminal pngcairo size 900,600\nset output 'solutions.png'"
    )
    .unwrap();
    let parts: Vec<String> = curves
        .iter()
        .map(|(file, label)| format!("'{file}' using 1:2 with linespoints title '{label}'"))
        .collect();
    writeln!(gp, "plot {}", parts.join(", \\\n     ")).unwrap();
    gp
}

fn trace_plot(stems: &[String]) -> String {
    let mut gp = String::from("set datafile separator ','\n");
    writeln!(gp, "set xlabel 't'\nset ylabel 'total variation'").unwrap();
    writeln!(
        gp,
        "set terminal pngcairo size 900,600\nset output 'traces.png'"
    )
    .unwrap();
    let parts: Vec<String> = stems
        .iter()
        .map(|s| format!("'trace_{s}.csv' using 2:3 with linespoints title '{s}'"))
        .collect();
    writeln!(gp, "plot {}", parts.join(", \\\n     ")).unwrap();
    gp
}

/// Writes `spec.json`, `reference.csv`, per-method solution and trace CSVs,
/// and gnuplot scripts.
pub fn write_experiment(dir: &Path, result: &ExperimentResult) -> Result<()> {
    prepare_output_dir(dir)?;
    write_atomic(&dir.join("spec.json"), &result.spec.to_json())?;
    write_atomic(
        &dir.join("reference.csv"),
        &grid_function_csv(&result.reference),
    )?;
    let mut curves = vec![("reference.csv".to_string(), "reference".to_string())];
    let mut stems = Vec::new();
    for run in &result.runs {
        let stem = write_run(dir, run, "")?;
        curves.push((format!("solution_{stem}.csv"), run.method.clone()));
        stems.push(stem);
    }
    let title = format!("{} at cfl {}", result.spec.problem, result.spec.cfl);
    write_atomic(
        &dir.join("solutions.gp"),
        &solution_plot(&title, &curves, None),
    )?;
    write_atomic(&dir.join("traces.gp"), &trace_plot(&stems))
}

/// Writes the comparison runs, the second-CFL family run and a close-up plot
/// around the shock.
pub fn write_burgers(dir: &Path, result: &BurgersResult) -> Result<()> {
    write_experiment(dir, &result.main)?;
    let suffix = format!("_cfl{}", result.second.cfl);
    let stem = write_run(dir, &result.second, &suffix)?;
    let mut curves = vec![("reference.csv".to_string(), "reference".to_string())];
    curves.extend(result.main.runs.iter().map(|r| {
        (
            format!("solution_{}.csv", run_stem(r, "")),
            r.method.clone(),
        )
    }));
    curves.push((
        format!("solution_{stem}.csv"),
        format!("{} cfl {}", result.second.method, result.second.cfl),
    ));
    let window = Some((0.5 - SHOCK_WINDOW, 0.5 + SHOCK_WINDOW));
    let title = format!("Burgers close-up at t = {}", result.main.spec.t_end);
    write_atomic(
        &dir.join("solutions.gp"),
        &solution_plot(&title, &curves, window),
    )
}

/// Writes `spec.json` of the finest run, `table.csv` and a log-log plot.
pub fn write_convergence(dir: &Path, table: &ConvergenceTable, spec_json: &str) -> Result<()> {
    prepare_output_dir(dir)?;
    write_atomic(&dir.join("spec.json"), spec_json)?;
    write_atomic(&dir.join("table.csv"), &table.to_csv())?;
    let mut gp = String::from("set datafile separator ','\n");
    writeln!(
        gp,
        "set logscale xy\nset xlabel 'n'\nset ylabel 'max-norm error'"
    )
    .unwrap();
    writeln!(
        gp,
        "set terminal pngcairo size 900,600\nset output 'convergence.png'"
    )
    .unwrap();
    let parts: Vec<String> = table
        .methods
        .iter()
        .enumerate()
        .map(|(j, m)| {
            format!(
                "'table.csv' using 1:{} with linespoints title '{m}'",
                2 + 2 * j
            )
        })
        .collect();
    writeln!(gp, "plot {}", parts.join(", \\\n     ")).unwrap();
    write_atomic(&dir.join("convergence.gp"), &gp)
}
