//! Square-wave advection with first-order operators at CFL 0.9 and 8.
//! At CFL 8 the family keeps the total variation from growing while the
//! trapezoidal rule overshoots.
//!
//! ```bash
//! cargo run --release --example square_wave -- out/square
//! ```

use dwssp::experiments::run_square_wave;
use dwssp::io::write_experiment;

fn main() -> dwssp::Result<()> {
    let out = std::env::args().nth(1);
    for cfl in [0.9, 8.0] {
        let result = run_square_wave(cfl)?;
        println!("cfl {cfl}");
        for run in &result.runs {
            println!(
                "  {:<16} error {:.4e}  peak max-norm {:.6}  largest TV increase {:+.2e}",
                run.method,
                run.error,
                run.trace.peak_maxnorm(),
                run.trace.max_tv_increase()
            );
        }
        if let Some(dir) = &out {
            let dir = std::path::Path::new(dir).join(format!("cfl{cfl}"));
            write_experiment(&dir, &result)?;
            println!("  wrote {}", dir.display());
        }
    }
    Ok(())
}
