//! For explicit methods the coefficient is limited by the number of stages.
//! The amplification polynomial of the optimal Shu–Osher form is expanded in
//! powers of `1 + z/r` and `1 + z~/r`; its weighted coefficient sum equals
//! the coefficient.

use dwssp::methods::BuiltinMethod;
use dwssp::ssp::{amplification_gamma, rk_certify, verify_stage_bound, DEFAULT_TOL};

fn main() -> dwssp::Result<()> {
    for m in BuiltinMethod::explicit_catalog() {
        let t = m.tableau()?;
        let cert = rk_certify(&t, DEFAULT_TOL)?;
        let g = amplification_gamma(&cert.certificate)?;
        println!(
            "{m}: s = {}, C = {:.9}, bound sum = {:.9}",
            t.stages(),
            cert.ctilde,
            verify_stage_bound(&g)?
        );
        for (j, row) in g.gamma.iter().enumerate() {
            println!("  j = {j}: {:.6?}", row);
        }
    }
    Ok(())
}
