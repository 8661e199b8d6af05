//! Optimal downwind multistep methods of order two: the coefficient stays at
//! two however many steps are allowed.

use dwssp::methods::lmm_order_residuals;
use dwssp::ssp::optimal_lmm;

fn main() -> dwssp::Result<()> {
    for implicit in [true, false] {
        println!("{}", if implicit { "implicit" } else { "explicit" });
        for k in 1..=6 {
            if !implicit && k < 2 {
                continue;
            }
            let (m, c) = optimal_lmm(k, 2, implicit, 1e-8)?;
            let defect = lmm_order_residuals(&m, 2)
                .iter()
                .fold(0.0f64, |a, r| a.max(r.abs()));
            println!("  k = {k}: C = {c:.8}  order defect {defect:.1e}");
            println!("    alpha {:.4?}", m.alpha());
            println!("    beta  {:.4?}", m.beta());
            println!("    beta~ {:.4?}", m.betatilde());
        }
    }
    Ok(())
}
