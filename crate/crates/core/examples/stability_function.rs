//! Stability function of the family: coefficients, a sweep along the
//! imaginary axis, and the limit at infinity.

use dwssp::methods::{catalog, evaluate_psi, stability_function};
use num_complex::Complex64;

fn main() -> dwssp::Result<()> {
    let r: f64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(8.0);
    let psi = stability_function(&catalog::downwind_family(r)?);
    println!("numerator   {:?}", psi.numerator);
    println!("denominator {:?}", psi.denominator);

    let mut peak = 0.0f64;
    for k in 0..=1200 {
        let y = 10f64.powf(-4.0 + k as f64 / 100.0);
        peak = peak.max(evaluate_psi(&psi, Complex64::new(0.0, y))?.norm());
    }
    println!("max |psi(iy)| for y in [1e-4, 1e8]: {peak:.15}");
    println!(
        "|psi(-1e8)| = {:.12}",
        evaluate_psi(&psi, Complex64::new(-1e8, 0.0))?.norm()
    );
    println!("limit        {:.12}", psi.limit_at_infinity());

    for x in [-0.5, -2.0, -8.0, -32.0] {
        println!(
            "psi({x}) = {:.6}",
            evaluate_psi(&psi, Complex64::new(x, 0.0))?.re
        );
    }
    Ok(())
}
