//! Burgers' equation from a sine wave, run just past shock formation at
//! CFL 6.5 and compared against a fine-grid reference.
//!
//! ```bash
//! cargo run --release --example burgers_shock -- 512
//! ```

use dwssp::experiments::{run_burgers, shock_window_error};

fn main() -> dwssp::Result<()> {
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(256);
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    let result = run_burgers(6.5, n, 3.25, jobs)?;
    let reference = &result.main.reference;
    for run in result
        .main
        .runs
        .iter()
        .chain(std::iter::once(&result.second))
    {
        println!(
            "{:<16} cfl {:<5} max error {:.4e}  near shock {:.4e}  Newton iterations {}",
            run.method,
            run.cfl,
            run.error,
            shock_window_error(&run.solution, reference),
            run.trace.total_newton_iterations()
        );
    }
    println!(
        "family cfl sensitivity near the shock: {:.4}",
        result.cfl_sensitivity()
    );
    Ok(())
}
