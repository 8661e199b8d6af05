use nalgebra::{DMatrix, DVector};

use super::lp::{lp_feasible, LinearProgram};
use crate::error::{Error, Result};
use crate::methods::{shu_osher_to_butcher, DownwindTableau, ShuOsherRep};

/// Upper end of the bisection bracket.
pub const BRACKET_CAP: f64 = 1e6;

/// Default bisection tolerance.
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct FeasibilityResult {
    pub feasible: bool,
    /// Present iff `feasible`.
    pub certificate: Option<ShuOsherRep>,
    /// Most negative certificate entry or largest constraint residual when
    /// feasible; the phase-one infeasibility otherwise.
    pub max_violation: f64,
}

/// Builds the linear system in the unknowns `(v, P, P̃)` whose nonnegative
/// solutions are Shu–Osher representations of `t` at parameter `r`:
///
/// ```text
/// P_i + r (P_i + P̃_i) A = r [A; bᵀ]_i
/// P̃_i + r (P_i + P̃_i) Ã = r [Ã; b̃ᵀ]_i
/// v_i + Σ_j (p_ij + p̃_ij) = 1
/// ```
///
/// Variable layout: `v` (s+1), then `P` row-major, then `P̃` row-major.
pub fn shu_osher_program(t: &DownwindTableau, r: f64) -> LinearProgram {
    let s = t.stages();
    let rows = s + 1;
    let nv = rows + 2 * rows * s;
    let neq = 2 * rows * s + rows;
    let p_idx = |i: usize, j: usize| rows + i * s + j;
    let pt_idx = |i: usize, j: usize| rows + rows * s + i * s + j;
    let a = t.a();
    let at = t.atilde();
    let aext = t.a_extended();
    let atext = t.atilde_extended();

    let mut m = DMatrix::zeros(neq, nv);
    let mut rhs = DVector::zeros(neq);
    let mut eq = 0;
    for (coef, ext, is_tilde) in [(a, &aext, false), (at, &atext, true)] {
        for i in 0..rows {
            for j in 0..s {
                let own = if is_tilde { pt_idx(i, j) } else { p_idx(i, j) };
                m[(eq, own)] += 1.0;
                for l in 0..s {
                    m[(eq, p_idx(i, l))] += r * coef[(l, j)];
                    m[(eq, pt_idx(i, l))] += r * coef[(l, j)];
                }
                rhs[eq] = r * ext[(i, j)];
                eq += 1;
            }
        }
    }
    for i in 0..rows {
        m[(eq, i)] = 1.0;
        for l in 0..s {
            m[(eq, p_idx(i, l))] = 1.0;
            m[(eq, pt_idx(i, l))] = 1.0;
        }
        rhs[eq] = 1.0;
        eq += 1;
    }
    LinearProgram::new(m, rhs)
}

fn unpack(t: &DownwindTableau, r: f64, x: &DVector<f64>) -> Result<ShuOsherRep> {
    let s = t.stages();
    let rows = s + 1;
    let v = DVector::from_fn(rows, |i, _| x[i]);
    let p = DMatrix::from_fn(rows, s, |i, j| x[rows + i * s + j]);
    let pt = DMatrix::from_fn(rows, s, |i, j| x[rows + rows * s + i * s + j]);
    ShuOsherRep::new(r, v, p, pt)
}

/// Decides whether `t` has a nonnegative Shu–Osher representation at `r`.
pub fn rk_feasible_at(t: &DownwindTableau, r: f64) -> Result<FeasibilityResult> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::domain(format!(
            "r must be finite and nonnegative, got {r}"
        )));
    }
    let lp = shu_osher_program(t, r);
    let sol = lp_feasible(&lp)?;
    if !sol.feasible() {
        return Ok(FeasibilityResult {
            feasible: false,
            certificate: None,
            max_violation: sol.infeasibility,
        });
    }
    let x = sol.x.expect("feasible solutions carry a point");
    let rep = unpack(t, r, &x)?;
    let max_violation = lp.residual(&x).max((-rep.min_entry()).max(0.0));
    Ok(FeasibilityResult {
        feasible: true,
        certificate: Some(rep),
        max_violation,
    })
}

/// Result of bisecting for the downwind SSP coefficient.
#[derive(Debug, Clone)]
pub struct SspCertification {
    /// Largest feasible `r` found (lower end of the final bracket).
    pub ctilde: f64,
    /// Certificate at `ctilde`.
    pub certificate: ShuOsherRep,
    pub tolerance: f64,
    /// Feasibility confirmed at 1/4, 1/2 and 3/4 of `ctilde`.
    pub monotone: bool,
}

/// Computes the downwind SSP coefficient by bisection on LP feasibility.
pub fn rk_certify(t: &DownwindTableau, tol: f64) -> Result<SspCertification> {
    if !(tol > 0.0) {
        return Err(Error::domain("tolerance must be positive"));
    }
    let zero = rk_feasible_at(t, 0.0)?;
    let mut best = zero
        .certificate
        .ok_or_else(|| Error::domain("method is not feasible at r = 0"))?;
    let mut lo = 0.0;
    let mut hi = 1.0;
    loop {
        let res = rk_feasible_at(t, hi)?;
        if !res.feasible {
            break;
        }
        best = res.certificate.expect("feasible");
        lo = hi;
        if hi >= BRACKET_CAP {
            return Err(Error::BracketOverflow { cap: BRACKET_CAP });
        }
        hi = (hi * 2.0).min(BRACKET_CAP);
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let res = rk_feasible_at(t, mid)?;
        if res.feasible {
            lo = mid;
            best = res.certificate.expect("feasible");
        } else {
            hi = mid;
        }
    }
    let mut monotone = true;
    for f in [0.25, 0.5, 0.75] {
        if !rk_feasible_at(t, f * lo)?.feasible {
            monotone = false;
        }
    }
    Ok(SspCertification {
        ctilde: lo,
        certificate: best,
        tolerance: tol,
        monotone,
    })
}

/// Downwind SSP coefficient of a Runge–Kutta method, to within `tol`.
pub fn rk_downwind_ssp_coefficient(t: &DownwindTableau, tol: f64) -> Result<f64> {
    rk_certify(t, tol).map(|c| c.ctilde)
}

/// Converts a certificate back to a tableau and measures the mismatch.
pub fn certificate_mismatch(t: &DownwindTableau, rep: &ShuOsherRep) -> Result<f64> {
    Ok(shu_osher_to_butcher(rep)?.max_abs_diff(t))
}
