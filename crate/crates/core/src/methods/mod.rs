//! Downwind Runge–Kutta and linear multistep methods: representations,
//! conversions, order conditions and stability functions.

mod analysis;
pub mod catalog;
mod lmm;
mod shu_osher;
mod tableau;

pub use analysis::{
    amplification_factor, evaluate_psi, evaluate_psi_matrix, observed_order, rk_order_residuals,
    stability_function, underlying_method, RationalStabilityFunction,
};
pub use catalog::{BuiltinMethod, Method};
pub use lmm::{lmm_order_residuals, DownwindLmm};
pub use shu_osher::{
    make_optimal_family, shu_osher_to_butcher, ShuOsherRep, NONNEGATIVE_TOL, SINGULAR_TOL,
};
pub use tableau::DownwindTableau;
