//! Methods outside the catalog are read from JSON documents. This one is a
//! two-stage explicit method whose update uses the downwind operator on the
//! first stage; its underlying method is second order.

use dwssp::methods::{observed_order, Method};
use dwssp::ssp::{rk_certify, rk_feasible_at, DEFAULT_TOL};

const DOC: &str = r#"{
  "s": 2,
  "A":      [[0.0, 0.0], [0.6666666666666666, 0.0]],
  "Atilde": [[0.0, 0.0], [0.0, 0.0]],
  "b":      [0.5, 0.75],
  "btilde": [0.25, 0.0],
  "c":      [0.0, 0.6666666666666666]
}"#;

fn main() -> dwssp::Result<()> {
    let Method::RungeKutta(t) = Method::from_json(DOC)? else {
        unreachable!("document has no step count");
    };
    println!("order {}", observed_order(&t, 1e-10));
    match rk_certify(&t, DEFAULT_TOL) {
        Ok(cert) => {
            println!("C = {:.8}", cert.ctilde);
            let probe = rk_feasible_at(&t, cert.ctilde * 1.01)?;
            println!("feasible 1% above C: {}", probe.feasible);
        }
        Err(e) => println!("no certificate: {e}"),
    }
    Ok(())
}
