//! Matrix-free Newton with GMRES on a small nonlinear system.

use dwssp::solver::{newton_krylov_solve, NewtonSettings};

fn main() -> dwssp::Result<()> {
    let settings = NewtonSettings::default();

    let cube = |x: &[f64], g: &mut [f64]| g[0] = x[0].powi(3) - 8.0;
    let out = newton_krylov_solve(&cube, vec![3.0], &settings)?;
    println!(
        "x^3 = 8: x = {:.12} in {} iterations",
        out.x[0], out.iterations
    );

    // u_i - 0.1 (u_{i-1} - 2u_i + u_{i+1}) + u_i^3 = 1 on a ring
    let n = 40;
    let ring = move |u: &[f64], g: &mut [f64]| {
        for i in 0..n {
            let l = u[(i + n - 1) % n];
            let r = u[(i + 1) % n];
            g[i] = u[i] - 0.1 * (l - 2.0 * u[i] + r) + u[i].powi(3) - 1.0;
        }
    };
    let out = newton_krylov_solve(&ring, vec![0.0; n], &settings)?;
    println!(
        "ring: u_0 = {:.12}, residual {:.1e}",
        out.x[0], out.residual
    );
    let history: Vec<String> = out.history.iter().map(|h| format!("{h:.2e}")).collect();
    println!("residual history {}", history.join(" "));
    Ok(())
}
