//! Periodic-grid spatial operators: first-order and WENO5 upwind/downwind
//! pairs, their matrices, and solution norms.

mod first_order;
mod grid;
mod semi;
mod weno;

pub use first_order::{
    downwind_first, downwind_first_into, first_order_matrices, upwind_first, upwind_first_into,
};
pub use grid::{max_norm, sine_wave, square_wave, tv_seminorm, GridFunction, PeriodicGrid};
pub use semi::{
    operator_matrices, FirstOrderAdvection, LinearPair, SemiDiscretization, SpatialScheme,
    Weno5Advection, Weno5Burgers,
};
pub use weno::{weno5_advection, weno5_burgers, weno5_reconstruct};

/// Bias of a reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Upwind,
    Downwind,
}
