//! Strong-stability-preserving time integration with paired upwind and
//! downwind-biased spatial operators.
//!
//! The crate covers four layers:
//!
//! * [`methods`]: downwind Runge–Kutta tableaux, Shu–Osher representations,
//!   linear multistep coefficients, order conditions and stability functions,
//!   plus the two-stage second-order family whose downwind SSP coefficient
//!   equals its parameter `r`.
//! * [`ssp`]: certification of downwind SSP coefficients by linear-programming
//!   feasibility and bisection, optimal multistep coefficients, and the
//!   amplification-polynomial expansion of explicit methods.
//! * [`spatial`] and [`solver`]: periodic first-order and WENO5 operator pairs
//!   and a time stepper that solves the coupled implicit stage equations.
//! * [`experiments`] and [`cli`]: square-wave and sine advection, Burgers
//!   shock formation, and the command-line front end.

// `!(x > 0.0)` is how NaN inputs are rejected throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod experiments;
pub mod io;
pub mod methods;
pub mod poly;
pub mod solver;
pub mod spatial;
pub mod ssp;

pub use error::{Error, Result};
