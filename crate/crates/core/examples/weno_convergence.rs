//! Sine advection with WENO5 at CFL 8. Errors and observed orders per grid.

use dwssp::experiments::run_convergence_table;

fn main() -> dwssp::Result<()> {
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    let table = run_convergence_table(8.0, &[32, 64, 128, 256], jobs)?;
    print!("{:>5}", "n");
    for m in &table.methods {
        print!("  {m:>16} {:>6}", "order");
    }
    println!();
    for row in &table.rows {
        print!("{:>5}", row.n);
        for (j, e) in row.errors.iter().enumerate() {
            match &row.orders {
                Some(o) => print!("  {e:>16.4e} {:>6.2}", o[j]),
                None => print!("  {e:>16.4e} {:>6}", ""),
            }
        }
        println!();
    }
    Ok(())
}
