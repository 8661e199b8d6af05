//! Independent oracles for derived values. Each oracle avoids the code path
//! it checks; the frozen numbers below were produced by the oracles and are
//! asserted against both the oracle and the library.

use dwssp::experiments::{reference_solution, Problem};
use dwssp::methods::catalog::{self, BuiltinMethod};
use dwssp::methods::{
    evaluate_psi, lmm_order_residuals, make_optimal_family, shu_osher_to_butcher,
    stability_function, underlying_method, DownwindLmm, DownwindTableau, ShuOsherRep,
};
use dwssp::spatial::{
    downwind_first, first_order_matrices, max_norm, sine_wave, tv_seminorm, upwind_first,
    weno5_advection, weno5_burgers, Direction, GridFunction, PeriodicGrid,
};
use dwssp::ssp::{
    amplification_gamma, lmm_downwind_ssp_coefficient, optimal_lmm, rk_certify,
    rk_downwind_ssp_coefficient, verify_stage_bound, DEFAULT_TOL,
};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Canonical Shu–Osher coefficients `P = r M⁻¹K`, `P̃ = r M⁻¹K̃`,
/// `v = M⁻¹1` with `M = I + r(K + K̃)` on the extended tableau.
fn canonical_feasible(t: &DownwindTableau, r: f64) -> bool {
    let s = t.stages();
    let mut k = DMatrix::zeros(s + 1, s + 1);
    let mut kt = DMatrix::zeros(s + 1, s + 1);
    for i in 0..s {
        for j in 0..s {
            k[(i, j)] = t.a()[(i, j)];
            kt[(i, j)] = t.atilde()[(i, j)];
        }
    }
    for j in 0..s {
        k[(s, j)] = t.b()[j];
        kt[(s, j)] = t.btilde()[j];
    }
    let m = DMatrix::identity(s + 1, s + 1) + (&k + &kt) * r;
    let Some(inv) = m.try_inverse() else {
        return false;
    };
    let p = &inv * &k * r;
    let pt = &inv * &kt * r;
    let v = &inv * DVector::from_element(s + 1, 1.0);
    let tol = -1e-12;
    p.iter().all(|&x| x >= tol) && pt.iter().all(|&x| x >= tol) && v.iter().all(|&x| x >= tol)
}

/// Bisection on the canonical representation; `None` when still feasible at
/// 2^20.
fn oracle_coefficient(t: &DownwindTableau) -> Option<f64> {
    let (mut lo, mut hi) = (0.0, 1.0);
    while canonical_feasible(t, hi) {
        lo = hi;
        hi *= 2.0;
        if hi > 1048576.0 {
            return None;
        }
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if canonical_feasible(t, mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

#[test]
fn bisection_oracle_frozen_values() {
    let cases: [(&str, DownwindTableau, f64); 6] = [
        ("forward-euler", catalog::forward_euler(), 1.0),
        ("ssprk22", catalog::ssprk22(), 1.0),
        ("ssprk33", catalog::ssprk33(), 1.0),
        ("trapezoidal", catalog::trapezoidal(), 2.0),
        ("dw-family:8", catalog::downwind_family(8.0).unwrap(), 8.0),
        (
            "dw-family:20",
            catalog::downwind_family(20.0).unwrap(),
            20.0,
        ),
    ];
    for (name, t, frozen) in cases {
        let oracle = oracle_coefficient(&t).unwrap();
        assert!((oracle - frozen).abs() < 1e-9, "{name}: oracle {oracle}");
        let lib = rk_downwind_ssp_coefficient(&t, DEFAULT_TOL).unwrap();
        assert!((lib - frozen).abs() < 1e-6, "{name}: library {lib}");
    }
    assert_eq!(oracle_coefficient(&catalog::backward_euler()), None);
    assert!(rk_downwind_ssp_coefficient(&catalog::backward_euler(), DEFAULT_TOL).is_err());
}

#[test]
fn certificate_reproduces_the_tableau() {
    for name in ["ssprk22", "ssprk33", "trapezoidal", "dw-family:6"] {
        let t = name.parse::<BuiltinMethod>().unwrap().tableau().unwrap();
        let cert = rk_certify(&t, DEFAULT_TOL).unwrap();
        assert!(cert.certificate.is_certificate(), "{name}");
        let back = shu_osher_to_butcher(&cert.certificate).unwrap();
        assert!(
            back.max_abs_diff(&t) < 1e-8,
            "{name}: {}",
            back.max_abs_diff(&t)
        );
        assert!(cert.monotone);
    }
}

/// Entries at r = 8 by hand substitution, as exact binary fractions.
#[test]
fn family_tableau_by_hand() {
    let t = shu_osher_to_butcher(&make_optimal_family(8.0).unwrap()).unwrap();
    let expect_a = [[23.0 / 8.0, 0.0], [3.0, 0.0]];
    let expect_at = [[0.0, 17.0 / 8.0], [0.0, 17.0 / 8.0]];
    for i in 0..2 {
        for j in 0..2 {
            assert!((t.a()[(i, j)] - expect_a[i][j]).abs() < 1e-12);
            assert!((t.atilde()[(i, j)] - expect_at[i][j]).abs() < 1e-12);
        }
    }
    assert!((t.b()[0] - 3.0).abs() < 1e-12 && (t.b()[1] - 0.125).abs() < 1e-12);
    assert!(t.btilde()[0].abs() < 1e-12 && (t.btilde()[1] - 17.0 / 8.0).abs() < 1e-12);
    assert!((t.c()[0] - 0.75).abs() < 1e-12 && (t.c()[1] - 0.875).abs() < 1e-12);

    let u = underlying_method(&t);
    assert!((u.b()[0] - 3.0).abs() < 1e-12 && (u.b()[1] + 2.0).abs() < 1e-12);
}

/// Closed-form general-r tableau against the conversion.
#[test]
fn family_tableau_general_r() {
    for r in [3.5, 4.0, 6.0, 8.0, 20.0, 100.0] {
        let t = catalog::downwind_family(r).unwrap();
        let q = (r * r - 4.0 * r + 2.0) / (2.0 * r);
        let a11 = (r * r - 2.0 * r - 2.0) / (2.0 * r);
        let scale = 1.0 + r.abs();
        assert!((t.a()[(0, 0)] - a11).abs() < 1e-12 * scale, "r = {r}");
        assert!((t.a()[(1, 0)] - (r - 2.0) / 2.0).abs() < 1e-12 * scale);
        assert!((t.atilde()[(0, 1)] - q).abs() < 1e-12 * scale);
        assert!((t.atilde()[(1, 1)] - q).abs() < 1e-12 * scale);
        assert!((t.b()[0] - (r - 2.0) / 2.0).abs() < 1e-12 * scale);
        assert!((t.btilde()[1] - q).abs() < 1e-12 * scale);
        assert!((t.c()[0] - (r - 2.0) / r).abs() < 1e-12);
        assert!((t.c()[1] - (r - 1.0) / r).abs() < 1e-12);
    }
}

fn psi_closed_form(r: f64, z: Complex64) -> Complex64 {
    let num = 1.0 + z * (2.0 / r) + z * z / (r * r);
    let den = 1.0 - z * ((r - 2.0) / r) + z * z * ((r * r - 4.0 * r + 2.0) / (2.0 * r * r));
    num / den
}

#[test]
fn stability_function_closed_form() {
    for r in [4.0, 8.0, 20.0] {
        let psi = stability_function(&catalog::downwind_family(r).unwrap());
        for (re, im) in [(-1.0, 0.0), (0.3, 2.0), (-7.0, -3.5), (0.0, 40.0)] {
            let z = Complex64::new(re, im);
            let got = evaluate_psi(&psi, z).unwrap();
            assert!(
                (got - psi_closed_form(r, z)).norm() < 1e-12,
                "r = {r}, z = {z}"
            );
        }
        let limit = 2.0 / (r * r - 4.0 * r + 2.0);
        assert!((psi.limit_at_infinity() - limit).abs() < 1e-12);
    }
    let psi8 = stability_function(&catalog::downwind_family(8.0).unwrap());
    let at_minus_one = evaluate_psi(&psi8, Complex64::new(-1.0, 0.0)).unwrap();
    assert!((at_minus_one.re - 0.765625 / 2.015625).abs() < 1e-14);
}

#[test]
fn lmm_closed_forms() {
    let be = DownwindLmm::backward_euler();
    assert_eq!(lmm_downwind_ssp_coefficient(&be), f64::INFINITY);
    let tr = DownwindLmm::trapezoidal();
    assert!((lmm_downwind_ssp_coefficient(&tr) - 2.0).abs() < 1e-15);
    for m in [be, tr] {
        assert!(lmm_order_residuals(&m, 1).iter().all(|r| r.abs() < 1e-14));
    }
    // optimal one-step second-order method is the trapezoidal rule
    let (m, c) = optimal_lmm(1, 2, true, 1e-9).unwrap();
    assert!((c - 2.0).abs() < 1e-6);
    assert!((m.beta()[0] - 0.5).abs() < 1e-6 && (m.beta()[1] - 0.5).abs() < 1e-6);
}

#[test]
fn first_order_stencils_by_hand() {
    let grid = PeriodicGrid::new(4).unwrap();
    let u = GridFunction::new(grid, vec![0.0, 1.0, 0.0, 0.0]).unwrap();
    assert_eq!(upwind_first(&u).values(), &[0.0, -4.0, 4.0, 0.0]);
    assert_eq!(downwind_first(&u).values(), &[4.0, -4.0, 0.0, 0.0]);

    let (l, lt) = first_order_matrices(&PeriodicGrid::new(6).unwrap());
    let lap = l - lt;
    for i in 0..6 {
        for j in 0..6 {
            let d = (i as i64 - j as i64).rem_euclid(6);
            let expect = match d {
                0 => -2.0,
                1 | 5 => 1.0,
                _ => 0.0,
            } * 6.0;
            assert_eq!(lap[(i, j)], expect);
        }
    }
}

fn log2_ratio(a: f64, b: f64) -> f64 {
    (a / b).log2()
}

#[test]
fn first_order_refinement() {
    let errs: Vec<f64> = [64, 128, 256]
        .iter()
        .map(|&n| {
            let g = PeriodicGrid::new(n).unwrap();
            let u = g.sample(sine_wave);
            let exact =
                g.sample(|x| -2.0 * std::f64::consts::PI * (2.0 * std::f64::consts::PI * x).cos());
            max_norm(&upwind_first(&u).difference(&exact))
        })
        .collect();
    for w in errs.windows(2) {
        let p = log2_ratio(w[0], w[1]);
        assert!((p - 1.0).abs() < 0.05, "order {p}");
    }
}

#[test]
fn weno_refinement() {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut adv = Vec::new();
    let mut burg = Vec::new();
    let mut cancel = Vec::new();
    for n in [32, 64, 128] {
        let g = PeriodicGrid::new(n).unwrap();
        let u = g.sample(sine_wave);
        // F ≈ -u_x
        let minus_ux = g.sample(|x| -two_pi * (two_pi * x).cos());
        let f = weno5_advection(&u, Direction::Upwind);
        let ft = weno5_advection(&u, Direction::Downwind);
        adv.push(max_norm(&f.difference(&minus_ux)));
        let sum: Vec<f64> = f
            .values()
            .iter()
            .zip(ft.values())
            .map(|(a, b)| a + b)
            .collect();
        cancel.push(sum.iter().fold(0.0f64, |m, v| m.max(v.abs())));

        // -(u²/2)_x for u = sin(2πx)/2 + 1, which keeps one wind direction
        let w = g.sample(|x| 1.0 + 0.5 * (two_pi * x).sin());
        let flux_x = g.sample(|x| {
            let v = 1.0 + 0.5 * (two_pi * x).sin();
            -v * 0.5 * two_pi * (two_pi * x).cos()
        });
        burg.push(max_norm(
            &weno5_burgers(&w, Direction::Upwind).difference(&flux_x),
        ));
    }
    for w in adv.windows(2) {
        assert!(log2_ratio(w[0], w[1]) >= 4.5, "advection {adv:?}");
    }
    for w in burg.windows(2) {
        assert!(log2_ratio(w[0], w[1]) >= 4.5, "burgers {burg:?}");
    }
    for w in cancel.windows(2) {
        assert!(log2_ratio(w[0], w[1]) >= 4.5, "F + F̃ {cancel:?}");
    }
}

#[test]
fn tv_of_sampled_sine() {
    let u = PeriodicGrid::new(128).unwrap().sample(sine_wave);
    assert!((tv_seminorm(&u) - 4.0).abs() < 0.01);
}

#[test]
fn burgers_reference_is_tvd() {
    let r = reference_solution(Problem::Burgers, 512, 0.16).unwrap();
    let u0 = Problem::Burgers.initial_data(r.grid());
    assert!(tv_seminorm(&r) <= tv_seminorm(&u0) + 1e-10);
    // odd symmetry about x = 1/2 survives the run
    let v = r.values();
    for i in 1..256 {
        assert!((v[i] + v[512 - i]).abs() < 1e-10);
    }
}

#[test]
fn gamma_for_ssprk22_and_a_split_stage() {
    let t = catalog::ssprk22();
    let cert = rk_certify(&t, DEFAULT_TOL).unwrap();
    let g = amplification_gamma(&cert.certificate).unwrap();
    // SSPRK22 at r = 1: u1 = w u, u2 = u/2 + w u1/2, so the map is 1/2 + w²/2
    assert!((g.get(0, 0) - 0.5).abs() < 1e-7);
    assert!(g.get(1, 0).abs() < 1e-7 && g.get(1, 1).abs() < 1e-7);
    assert!((g.get(2, 0) - 0.5).abs() < 1e-7);
    let bound = verify_stage_bound(&g).unwrap();
    assert!((bound - cert.ctilde).abs() < 1e-7, "{bound}");

    // u_{n+1} = (w + w̃) u / 2: the downwind half cancels the upwind half
    let p = nalgebra::DMatrix::from_row_slice(2, 1, &[0.0, 0.5]);
    let pt = nalgebra::DMatrix::from_row_slice(2, 1, &[0.0, 0.5]);
    let rep = ShuOsherRep::from_coefficients(2.0, p, pt).unwrap();
    let g = amplification_gamma(&rep).unwrap();
    assert_eq!(g.gamma, vec![vec![0.0], vec![0.5, 0.5]]);
    assert_eq!(verify_stage_bound(&g).unwrap(), 0.0);
}
