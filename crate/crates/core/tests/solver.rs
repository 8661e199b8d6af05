use dwssp::experiments::Problem;
use dwssp::methods::{catalog, DownwindLmm, Method};
use dwssp::solver::{
    lmm_step, rk_step, run, HistoryEntry, JacobianMode, NewtonSettings, RunConfig, StepContext,
    Stepper,
};
use dwssp::spatial::{
    first_order_matrices, max_norm, sine_wave, square_wave, tv_seminorm, FirstOrderAdvection,
    GridFunction, LinearPair, PeriodicGrid, SemiDiscretization, Weno5Advection, Weno5Burgers,
};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn advection(n: usize) -> FirstOrderAdvection {
    FirstOrderAdvection {
        grid: PeriodicGrid::new(n).unwrap(),
    }
}

fn fd_settings() -> NewtonSettings {
    NewtonSettings {
        jacobian_mode: JacobianMode::FiniteDifferenceMatvec,
        abs_tol: 1e-13,
        krylov_tol: 1e-8,
        ..NewtonSettings::default()
    }
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

#[test]
fn backward_euler_matches_direct_solve() {
    let semi = advection(24);
    let u = semi.grid.sample(square_wave);
    let dt = 3.0 * semi.grid.dx();
    let method = Method::RungeKutta(catalog::backward_euler());
    let mut stepper = Stepper::new(&method, &semi, NewtonSettings::default()).unwrap();
    let (got, stats) = stepper.rk_step(u.values(), dt).unwrap();
    assert_eq!(stats.newton_iterations, 0);

    let (l, _) = first_order_matrices(&semi.grid);
    let m = DMatrix::identity(24, 24) - l * dt;
    let expect = m
        .lu()
        .solve(&DVector::from_column_slice(u.values()))
        .unwrap();
    assert!(max_diff(&got, expect.as_slice()) < 1e-13);
}

/// Under `F̃ = -F` the family reduces to its stability function
/// `(I + 2Z/r + Z²/r²)(I - (r-2)Z/r + q Z²/r)⁻¹` with `q = (r²-4r+2)/(2r)`.
#[test]
fn family_on_underlying_pair_is_its_stability_function() {
    let n = 16;
    let grid = PeriodicGrid::new(n).unwrap();
    let (l, _) = first_order_matrices(&grid);
    let semi = LinearPair::underlying(l.clone(), grid.dx()).unwrap();
    let u = grid.sample(square_wave);
    for r in [4.0, 8.0, 20.0] {
        let dt = 0.7 * r * grid.dx();
        let z = &l * dt;
        let id = DMatrix::<f64>::identity(n, n);
        let z2 = &z * &z;
        let num = &id + &z * (2.0 / r) + &z2 * (1.0 / (r * r));
        let q = (r * r - 4.0 * r + 2.0) / (2.0 * r);
        let den = &id - &z * ((r - 2.0) / r) + &z2 * (q / r);
        let expect = den
            .lu()
            .solve(&(num * DVector::from_column_slice(u.values())))
            .unwrap();

        let method = Method::RungeKutta(catalog::downwind_family(r).unwrap());
        let mut stepper = Stepper::new(&method, &semi, NewtonSettings::default()).unwrap();
        let (got, _) = stepper.rk_step(u.values(), dt).unwrap();
        assert!(max_diff(&got, expect.as_slice()) < 1e-10, "r = {r}");
    }
}

#[test]
fn zero_step_is_identity() {
    let semi = advection(32);
    let u = semi.grid.sample(sine_wave);
    for name in ["ssprk33", "trapezoidal", "dw-family:8"] {
        let method = Method::resolve(name).unwrap();
        let ctx = StepContext {
            method: &method,
            semi: &semi,
            dt: 0.0,
            newton: NewtonSettings::default(),
        };
        let (v, _) = rk_step(&ctx, &u).unwrap();
        assert!(max_diff(v.values(), u.values()) < 1e-15, "{name}");
    }
}

#[test]
fn trapezoidal_multistep_closed_form() {
    let semi = advection(20);
    let u = semi.grid.sample(square_wave);
    let dt = 2.5 * semi.grid.dx();
    let method = Method::Multistep(DownwindLmm::trapezoidal());
    let ctx = StepContext {
        method: &method,
        semi: &semi,
        dt,
        newton: NewtonSettings::default(),
    };
    let history = vec![HistoryEntry::new(&semi, u.clone())];
    let (got, _) = lmm_step(&ctx, &history).unwrap();

    let (l, _) = first_order_matrices(&semi.grid);
    let id = DMatrix::<f64>::identity(20, 20);
    let lhs = &id - &l * (0.5 * dt);
    let rhs = (&id + &l * (0.5 * dt)) * DVector::from_column_slice(u.values());
    let expect = lhs.lu().solve(&rhs).unwrap();
    assert!(max_diff(got.values(), expect.as_slice()) < 1e-13);
}

#[test]
fn explicit_multistep_needs_no_solve() {
    let semi = Weno5Advection::new(PeriodicGrid::new(32).unwrap()).unwrap();
    let u = semi.grid.sample(sine_wave);
    let dt = 0.5 * semi.grid.dx();
    let method = Method::Multistep(DownwindLmm::forward_euler());
    let ctx = StepContext {
        method: &method,
        semi: &semi,
        dt,
        newton: NewtonSettings::default(),
    };
    let entry = HistoryEntry::new(&semi, u.clone());
    let (got, stats) = lmm_step(&ctx, std::slice::from_ref(&entry)).unwrap();
    assert_eq!(stats.newton_iterations, 0);
    let expect: Vec<f64> = u
        .values()
        .iter()
        .zip(&entry.f)
        .map(|(a, f)| a + dt * f)
        .collect();
    assert!(max_diff(got.values(), &expect) < 1e-15);
}

#[test]
fn backward_euler_lmm_agrees_with_rk() {
    let semi = advection(40);
    let u = semi.grid.sample(square_wave);
    let dt = 5.0 * semi.grid.dx();
    let rk = Method::RungeKutta(catalog::backward_euler());
    let lmm = Method::Multistep(DownwindLmm::backward_euler());
    let mk = |m| StepContext {
        method: m,
        semi: &semi,
        dt,
        newton: NewtonSettings::default(),
    };
    let (a, _) = rk_step(&mk(&rk), &u).unwrap();
    let (b, _) = lmm_step(&mk(&lmm), &[HistoryEntry::new(&semi, u.clone())]).unwrap();
    assert!(max_diff(a.values(), b.values()) < 1e-12);
}

#[test]
fn direct_and_newton_paths_agree() {
    let semi = advection(32);
    let u = semi.grid.sample(square_wave);
    for cfl in [0.9, 8.0] {
        let dt = cfl * semi.grid.dx();
        for name in ["trapezoidal", "dw-family:8", "backward-euler"] {
            let method = Method::resolve(name).unwrap();
            let mut direct = Stepper::new(&method, &semi, NewtonSettings::default()).unwrap();
            let mut newton = Stepper::new(&method, &semi, fd_settings()).unwrap();
            let (a, _) = direct.rk_step(u.values(), dt).unwrap();
            let (b, stats) = newton.rk_step(u.values(), dt).unwrap();
            assert!(stats.newton_iterations > 0);
            assert!(
                max_diff(&a, &b) < 1e-9,
                "{name} at cfl {cfl}: {}",
                max_diff(&a, &b)
            );
        }
    }
}

fn random_data(grid: &PeriodicGrid, seed: u64) -> GridFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    GridFunction::new(*grid, values).unwrap()
}

#[test]
fn family_is_tvd_up_to_its_coefficient() {
    let r = 8.0;
    let method = Method::resolve("dw-family:8").unwrap();
    let semi = advection(64);
    let data = [
        semi.grid.sample(square_wave),
        semi.grid.sample(sine_wave),
        random_data(&semi.grid, 7),
        random_data(&semi.grid, 11),
    ];
    for cfl in [0.5, 1.0, r / 2.0, r] {
        for u0 in &data {
            let out = run(RunConfig {
                method: &method,
                semi: &semi,
                cfl,
                t_end: 20.0 * cfl * semi.grid.dx(),
                u0: u0.clone(),
                newton: NewtonSettings::default(),
            })
            .unwrap();
            let rise = out.trace.max_tv_increase();
            assert!(
                rise <= 1e-12 * tv_seminorm(u0).max(1.0),
                "cfl {cfl}: TV rose by {rise}"
            );
            assert!(out.trace.peak_maxnorm() <= max_norm(u0) * (1.0 + 1e-12));
            let drift = (out.solution.sum() - u0.sum()).abs();
            assert!(drift < 1e-11 * semi.grid.len() as f64, "mass drift {drift}");
        }
    }
}

#[test]
fn family_beyond_its_coefficient_loses_monotonicity() {
    let method = Method::resolve("dw-family:8").unwrap();
    let semi = advection(64);
    let u0 = semi.grid.sample(square_wave);
    let out = run(RunConfig {
        method: &method,
        semi: &semi,
        cfl: 16.0,
        t_end: 0.5,
        u0: u0.clone(),
        newton: NewtonSettings::default(),
    })
    .unwrap();
    assert!(out.trace.max_tv_increase() > 1e-6);
}

#[test]
fn run_lands_on_end_time() {
    let method = Method::Multistep(DownwindLmm::trapezoidal());
    let semi = advection(50);
    let out = run(RunConfig {
        method: &method,
        semi: &semi,
        cfl: 3.0,
        t_end: 0.37,
        u0: semi.grid.sample(square_wave),
        newton: NewtonSettings::default(),
    })
    .unwrap();
    let last = out.trace.records.last().unwrap();
    assert_eq!(last.t, 0.37);
    assert_eq!(out.trace.records[0].step, 0);
    assert!((out.dt - 0.06).abs() < 1e-15);
}

#[test]
fn burgers_newton_converges() {
    let grid = PeriodicGrid::new(128).unwrap();
    let semi = Weno5Burgers::new(grid).unwrap();
    let u0 = Problem::Burgers.initial_data(&grid);
    let method = Method::resolve("dw-family:8").unwrap();
    let newton = NewtonSettings::default();
    let out = run(RunConfig {
        method: &method,
        semi: &semi,
        cfl: 4.0,
        t_end: 0.16,
        u0: u0.clone(),
        newton,
    })
    .unwrap();
    for rec in &out.trace.records[1..] {
        assert!(rec.newton_iters > 0);
        assert!(
            rec.residual <= newton.abs_tol + 1e-8,
            "step {}: {}",
            rec.step,
            rec.residual
        );
    }
    assert!(out.solution.values().iter().all(|v| v.is_finite()));
    assert!(out.trace.peak_maxnorm() <= max_norm(&u0) * 1.01);
    assert!((out.solution.sum() - u0.sum()).abs() < 1e-9);
    assert_eq!(semi.size(), 128);
}

/// A forward-Euler step undone by a downwind step leaves a defect of order
/// `dt²` when `dt ∝ dx`.
#[test]
fn downwind_step_reverses_forward_euler() {
    let defects: Vec<f64> = [64, 128, 256, 512]
        .iter()
        .map(|&n| {
            let semi = advection(n);
            let u = semi.grid.sample(sine_wave);
            let dt = 0.5 * semi.grid.dx();
            let mut f = vec![0.0; n];
            semi.apply_f(u.values(), &mut f);
            let u1: Vec<f64> = u.values().iter().zip(&f).map(|(a, b)| a + dt * b).collect();
            semi.apply_ftilde(&u1, &mut f);
            let u2: Vec<f64> = u1.iter().zip(&f).map(|(a, b)| a + dt * b).collect();
            max_diff(&u2, u.values())
        })
        .collect();
    for w in defects.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((order - 2.0).abs() < 0.1, "{defects:?}");
    }
}
