//! When the downwind operator only approximates the negated upwind one to
//! order q in space, the scheme picks up a diffusive term of size
//! r dx^q dt. Compare it with the dt^2 truncation term.

use dwssp::experiments::dissipation_probe;

fn main() -> dwssp::Result<()> {
    let r = 8.0;
    for n in [64, 128, 256, 512] {
        let dx = 1.0 / n as f64;
        let dt = 8.0 * dx;
        for q in [1, 5] {
            let d = dissipation_probe(r, q, dx, dt)?;
            println!(
                "n = {n:>3}, q = {q}: diffusive {:.3e}, ratio to dt^2 {:.3e}{}",
                d.magnitude,
                d.ratio,
                if d.polluted { "  (dominant)" } else { "" }
            );
        }
    }
    Ok(())
}
