//! Builds the two-stage family at a few parameters, converts it to Butcher
//! form and recovers its downwind SSP coefficient by bisection.
//!
//! ```bash
//! cargo run --example certify_family
//! ```

use dwssp::methods::{make_optimal_family, shu_osher_to_butcher};
use dwssp::ssp::{rk_certify, DEFAULT_TOL};

fn main() -> dwssp::Result<()> {
    for r in [4.0, 8.0, 20.0, 100.0] {
        let rep = make_optimal_family(r)?;
        let tableau = shu_osher_to_butcher(&rep)?;
        let cert = rk_certify(&tableau, DEFAULT_TOL)?;
        println!(
            "r = {r:>5}: C = {:.9}  c = ({:.6}, {:.6})  certificate min entry {:.2e}",
            cert.ctilde,
            tableau.c()[0],
            tableau.c()[1],
            cert.certificate.min_entry()
        );
    }

    let t = shu_osher_to_butcher(&make_optimal_family(8.0)?)?;
    println!("\nr = 8 tableau");
    for i in 0..2 {
        println!(
            "A[{i}] = {:?}   A~[{i}] = {:?}",
            t.a().row(i).iter().collect::<Vec<_>>(),
            t.atilde().row(i).iter().collect::<Vec<_>>()
        );
    }
    println!("b  = {:?}", t.b().as_slice());
    println!("b~ = {:?}", t.btilde().as_slice());
    Ok(())
}
