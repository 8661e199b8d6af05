use nalgebra::{DMatrix, DVector};

use super::lp::{lp_feasible, lp_solve, LinearProgram};
use super::rk::BRACKET_CAP;
use crate::error::{Error, Result};
use crate::methods::{lmm_order_residuals, DownwindLmm};

/// Downwind SSP coefficient `min_j α_j / (β_j + β̃_j)` over `j < k`.
///
/// Zero denominators impose no constraint, so a method whose ratios are all
/// unconstrained returns `f64::INFINITY`. Any negative `α_j`, `β_j` or `β̃_j`
/// (`j < k`) gives zero.
pub fn lmm_downwind_ssp_coefficient(m: &DownwindLmm) -> f64 {
    let k = m.steps();
    let mut best = f64::INFINITY;
    for j in 0..k {
        let (a, b, bt) = (m.alpha()[j], m.beta()[j], m.betatilde()[j]);
        if a < 0.0 || b < 0.0 || bt < 0.0 {
            return 0.0;
        }
        let d = b + bt;
        if d > 0.0 {
            best = best.min(a / d);
        }
    }
    best
}

/// Variable layout for the multistep program: `δ_0..δ_{k-1}`, then `β`, then
/// `β̃` (each of length `k + 1` when implicit, `k` when explicit).
struct LmmLayout {
    k: usize,
    nb: usize,
}

impl LmmLayout {
    fn beta(&self, j: usize) -> usize {
        self.k + j
    }
    fn betatilde(&self, j: usize) -> usize {
        self.k + self.nb + j
    }
    fn vars(&self) -> usize {
        self.k + 2 * self.nb
    }
}

/// Order conditions through `p` at fixed `r`, written in the nonnegative
/// unknowns `δ_j = α_j - r(β_j + β̃_j)`, `β_j`, `β̃_j`.
fn lmm_program(layout: &LmmLayout, p: usize, r: f64) -> LinearProgram {
    let k = layout.k;
    let pw = |j: usize, e: usize| (j as f64).powi(e as i32);
    let mut a = DMatrix::zeros(p + 1, layout.vars());
    let mut b = DVector::zeros(p + 1);
    for i in 0..=p {
        let deriv = |j: usize| if i == 0 { 0.0 } else { i as f64 * pw(j, i - 1) };
        for j in 0..k {
            a[(i, j)] = pw(j, i);
        }
        for j in 0..layout.nb {
            let alpha_part = if j < k { r * pw(j, i) } else { 0.0 };
            a[(i, layout.beta(j))] = alpha_part + deriv(j);
            a[(i, layout.betatilde(j))] = alpha_part - deriv(j);
        }
        b[i] = pw(k, i);
    }
    LinearProgram::new(a, b)
}

fn assemble(layout: &LmmLayout, r: f64, x: &DVector<f64>) -> DownwindLmm {
    let k = layout.k;
    let mut beta = vec![0.0; k + 1];
    let mut betatilde = vec![0.0; k + 1];
    for j in 0..layout.nb {
        beta[j] = x[layout.beta(j)];
        betatilde[j] = x[layout.betatilde(j)];
    }
    let alpha = (0..k)
        .map(|j| x[j] + r * (beta[j] + betatilde[j]))
        .collect();
    DownwindLmm::new(alpha, beta, betatilde).expect("layout sizes")
}

/// Shifts each pair `(β_j, β̃_j)` down by its minimum so that at most one of
/// them is nonzero. Order is unchanged (it depends only on `β_j - β̃_j`) and
/// the SSP coefficient can only grow.
pub fn reduce_downwind_pairs(m: &DownwindLmm) -> DownwindLmm {
    let mut beta = m.beta().to_vec();
    let mut betatilde = m.betatilde().to_vec();
    for (b, bt) in beta.iter_mut().zip(betatilde.iter_mut()) {
        let shift = b.min(*bt);
        if shift > 0.0 {
            *b -= shift;
            *bt -= shift;
        }
    }
    DownwindLmm::new(m.alpha().to_vec(), beta, betatilde).expect("same sizes")
}

/// Finds a `k`-step method of order `p` with the largest downwind SSP
/// coefficient, by bisection on `r`.
///
/// Returns the method and its coefficient; `f64::INFINITY` marks a method that
/// is still feasible at the bracket cap.
pub fn optimal_lmm(k: usize, p: usize, implicit: bool, tol: f64) -> Result<(DownwindLmm, f64)> {
    let max_p = if implicit { k + 1 } else { k };
    if k == 0 || p > max_p {
        return Err(Error::domain(format!(
            "need k >= 1 and p <= {max_p} for k = {k} ({} methods), got p = {p}",
            if implicit { "implicit" } else { "explicit" }
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::domain("tolerance must be positive"));
    }
    let layout = LmmLayout {
        k,
        nb: if implicit { k + 1 } else { k },
    };
    let feasible =
        |r: f64| -> Result<bool> { Ok(lp_feasible(&lmm_program(&layout, p, r))?.feasible()) };
    if !feasible(0.0)? {
        return Err(Error::InfeasibleOrder { k, p });
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut unbounded = false;
    loop {
        if !feasible(hi)? {
            break;
        }
        lo = hi;
        if hi >= BRACKET_CAP {
            unbounded = true;
            break;
        }
        hi = (hi * 2.0).min(BRACKET_CAP);
    }
    if !unbounded {
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if feasible(mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }

    // among optimizers at the final r, prefer the least downwind weight
    let mut cost = DVector::zeros(layout.vars());
    for j in 0..layout.nb {
        cost[layout.betatilde(j)] = 1.0;
    }
    let sol = lp_solve(&lmm_program(&layout, p, lo).with_objective(cost))?;
    let x = sol.x.ok_or(Error::InfeasibleOrder { k, p })?;
    let method = reduce_downwind_pairs(&assemble(&layout, lo, &x));
    debug_assert!(lmm_order_residuals(&method, p)
        .iter()
        .all(|e| e.abs() < 1e-6));
    let value = if unbounded { f64::INFINITY } else { lo };
    Ok((method, value))
}
