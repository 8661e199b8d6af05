//! Jiang–Shu WENO5 reconstruction and the flux-difference operators built on
//! it.

use super::grid::GridFunction;
use super::Direction;

const EPS: f64 = 1e-6;
const GHOST: usize = 3;

/// Reconstructs the interface value at `i + 1/2` from `f_{i-2}, ..., f_{i+2}`,
/// biased to the left.
#[inline]
pub fn weno5_reconstruct(fm2: f64, fm1: f64, f0: f64, fp1: f64, fp2: f64) -> f64 {
    let q0 = (2.0 * fm2 - 7.0 * fm1 + 11.0 * f0) / 6.0;
    let q1 = (-fm1 + 5.0 * f0 + 2.0 * fp1) / 6.0;
    let q2 = (2.0 * f0 + 5.0 * fp1 - fp2) / 6.0;

    let b0 =
        13.0 / 12.0 * (fm2 - 2.0 * fm1 + f0).powi(2) + 0.25 * (fm2 - 4.0 * fm1 + 3.0 * f0).powi(2);
    let b1 = 13.0 / 12.0 * (fm1 - 2.0 * f0 + fp1).powi(2) + 0.25 * (fm1 - fp1).powi(2);
    let b2 =
        13.0 / 12.0 * (f0 - 2.0 * fp1 + fp2).powi(2) + 0.25 * (3.0 * f0 - 4.0 * fp1 + fp2).powi(2);

    let a0 = 0.1 / (EPS + b0).powi(2);
    let a1 = 0.6 / (EPS + b1).powi(2);
    let a2 = 0.3 / (EPS + b2).powi(2);
    (a0 * q0 + a1 * q1 + a2 * q2) / (a0 + a1 + a2)
}

/// Copy of `v` with `GHOST` periodic ghost cells on each side.
fn padded(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    let mut out = Vec::with_capacity(n + 2 * GHOST);
    out.extend_from_slice(&v[n - GHOST..]);
    out.extend_from_slice(v);
    out.extend_from_slice(&v[..GHOST]);
    out
}

/// Interface values `h[i] ≈ f(x_{i+1/2})` for `i = 0..n`, reconstructed from
/// the left (`left = true`) or from the right.
fn interface_values(f: &[f64], left: bool, out: &mut [f64]) {
    let p = padded(f);
    for (i, h) in out.iter_mut().enumerate() {
        let c = i + GHOST;
        *h = if left {
            weno5_reconstruct(p[c - 2], p[c - 1], p[c], p[c + 1], p[c + 2])
        } else {
            weno5_reconstruct(p[c + 3], p[c + 2], p[c + 1], p[c], p[c - 1])
        };
    }
}

/// `out_i = sign (h_i - h_{i-1}) / dx` with periodic wrap.
fn flux_difference(h: &[f64], sign: f64, dx: f64, out: &mut [f64]) {
    let n = h.len();
    for i in 0..n {
        let prev = if i == 0 { h[n - 1] } else { h[i - 1] };
        out[i] = sign * (h[i] - prev) / dx;
    }
}

/// Unit-speed advection `u_t + u_x = 0`.
///
/// The upwind operator approximates `-u_x` with left-biased interface values;
/// the downwind operator approximates `+u_x` with right-biased ones.
pub fn weno5_advection_into(u: &[f64], dx: f64, dir: Direction, out: &mut [f64]) {
    let mut h = vec![0.0; u.len()];
    match dir {
        Direction::Upwind => {
            interface_values(u, true, &mut h);
            flux_difference(&h, -1.0, dx, out);
        }
        Direction::Downwind => {
            interface_values(u, false, &mut h);
            flux_difference(&h, 1.0, dx, out);
        }
    }
}

/// Burgers flux `u²/2` with global Lax–Friedrichs splitting
/// `f± = (f(u) ± αu)/2`, `α = max |u_i|`.
pub fn weno5_burgers_into(u: &[f64], dx: f64, dir: Direction, out: &mut [f64]) {
    let n = u.len();
    let alpha = u.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let fplus: Vec<f64> = u.iter().map(|&x| 0.5 * (0.5 * x * x + alpha * x)).collect();
    let fminus: Vec<f64> = u.iter().map(|&x| 0.5 * (0.5 * x * x - alpha * x)).collect();
    let mut hp = vec![0.0; n];
    let mut hm = vec![0.0; n];
    let (plus_left, sign) = match dir {
        Direction::Upwind => (true, -1.0),
        Direction::Downwind => (false, 1.0),
    };
    interface_values(&fplus, plus_left, &mut hp);
    interface_values(&fminus, !plus_left, &mut hm);
    for (a, b) in hp.iter_mut().zip(&hm) {
        *a += b;
    }
    flux_difference(&hp, sign, dx, out);
}

pub fn weno5_advection(u: &GridFunction, dir: Direction) -> GridFunction {
    let mut out = vec![0.0; u.values().len()];
    weno5_advection_into(u.values(), u.grid().dx(), dir, &mut out);
    u.with_values(out)
}

pub fn weno5_burgers(u: &GridFunction, dir: Direction) -> GridFunction {
    let mut out = vec![0.0; u.values().len()];
    weno5_burgers_into(u.values(), u.grid().dx(), dir, &mut out);
    u.with_values(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spatial::{max_norm, sine_wave, PeriodicGrid};

    #[test]
    fn constants_are_annihilated() {
        let u = PeriodicGrid::new(16).unwrap().sample(|_| 0.7);
        for dir in [Direction::Upwind, Direction::Downwind] {
            assert_eq!(max_norm(&weno5_advection(&u, dir)), 0.0);
            assert!(max_norm(&weno5_burgers(&u, dir)) < 1e-13);
        }
    }

    #[test]
    fn flux_difference_exact_for_quadratics() {
        // every candidate stencil differentiates quadratics exactly, so any
        // convex weighting does too
        let f = |x: f64| x * x - 3.0 * x;
        let right = weno5_reconstruct(f(-1.0), f(0.0), f(1.0), f(2.0), f(3.0));
        let left = weno5_reconstruct(f(-2.0), f(-1.0), f(0.0), f(1.0), f(2.0));
        // f'(1) = -1 with unit spacing
        assert!((right - left + 1.0).abs() < 1e-12);
    }

    #[test]
    fn mirror_relation() {
        let g = PeriodicGrid::new(32).unwrap();
        let u =
            g.sample(|x| sine_wave(x) + 0.3 * (6.0 * x).cos() + if x < 0.3 { 1.0 } else { 0.0 });
        let lhs = weno5_advection(&u.mirrored(), Direction::Downwind);
        let rhs = weno5_advection(&u, Direction::Upwind).mirrored();
        assert!(max_norm(&lhs.difference(&rhs)) < 1e-12);
        let lhs = weno5_burgers(&u.mirrored(), Direction::Downwind);
        let rhs = weno5_burgers(&u, Direction::Upwind).mirrored();
        assert!(max_norm(&lhs.difference(&rhs)) < 1e-12);
    }
}
