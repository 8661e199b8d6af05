//! The simplex solver behind certification, used directly.

use dwssp::ssp::{lp_feasible, lp_solve, LinearProgram};
use nalgebra::{DMatrix, DVector};

fn main() -> dwssp::Result<()> {
    // x + y + s = 4, x - y = 1, all nonnegative
    let a = DMatrix::from_row_slice(2, 3, &[1.0, 1.0, 1.0, 1.0, -1.0, 0.0]);
    let b = DVector::from_vec(vec![4.0, 1.0]);
    let lp = LinearProgram::new(a.clone(), b.clone());
    let sol = lp_feasible(&lp)?;
    println!("feasible: {} after {} pivots", sol.feasible(), sol.pivots);

    // maximize x by minimizing -x
    let best = lp_solve(&lp.with_objective(DVector::from_vec(vec![-1.0, 0.0, 0.0])))?;
    let x = best.x.expect("optimal point");
    println!(
        "argmax x = {:?}, objective {:?}",
        x.as_slice(),
        best.objective
    );

    let infeasible = LinearProgram::new(a, DVector::from_vec(vec![4.0, 5.0]));
    let sol = lp_feasible(&infeasible)?;
    println!(
        "x - y = 5 with x + y <= 4: {:?}, infeasibility {:.3}",
        sol.status, sol.infeasibility
    );
    Ok(())
}
