//! Downwind SSP coefficients: certification by linear programming, optimal
//! multistep methods, and the amplification-polynomial bound for explicit
//! methods.

mod gamma;
mod lmm;
pub mod lp;
mod report;
mod rk;

pub use gamma::{amplification_gamma, verify_stage_bound, GammaExpansion};
pub use lmm::{lmm_downwind_ssp_coefficient, optimal_lmm, reduce_downwind_pairs};
pub use lp::{lp_feasible, lp_solve, LinearProgram, LpSolution, LpStatus};
pub use report::CertificationReport;
pub use rk::{
    certificate_mismatch, rk_certify, rk_downwind_ssp_coefficient, rk_feasible_at,
    shu_osher_program, FeasibilityResult, SspCertification, BRACKET_CAP, DEFAULT_TOL,
};
