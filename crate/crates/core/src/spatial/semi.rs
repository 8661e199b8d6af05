use nalgebra::{DMatrix, DVector};

use super::first_order::{downwind_first_into, first_order_matrices, upwind_first_into};
use super::grid::PeriodicGrid;
use super::weno::{weno5_advection_into, weno5_burgers_into};
use super::Direction;
use crate::error::{Error, Result};

/// A pair of semi-discrete operators: `F` approximates `-f(U)_x` with upwind
/// bias and `F̃` approximates `+f(U)_x` with downwind bias. Both are monotone
/// under forward Euler for `dt <= dt_fe`.
pub trait SemiDiscretization: Send + Sync {
    fn size(&self) -> usize;

    fn apply_f(&self, u: &[f64], out: &mut [f64]);

    fn apply_ftilde(&self, u: &[f64], out: &mut [f64]);

    /// Forward-Euler step bound for the given state.
    fn dt_fe(&self, u: &[f64]) -> f64;

    /// `(L, L̃)` with `F(u) = L u` and `F̃(u) = -L̃ u` when the pair is linear.
    fn linear_matrices(&self) -> Option<(DMatrix<f64>, DMatrix<f64>)> {
        None
    }

    fn is_linear(&self) -> bool {
        self.linear_matrices().is_some()
    }

    fn name(&self) -> String;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpatialScheme {
    FirstOrder,
    Weno5,
}

/// First-order upwind/downwind differences for `u_t + u_x = 0`.
#[derive(Debug, Clone)]
pub struct FirstOrderAdvection {
    pub grid: PeriodicGrid,
}

impl SemiDiscretization for FirstOrderAdvection {
    fn size(&self) -> usize {
        self.grid.len()
    }

    fn apply_f(&self, u: &[f64], out: &mut [f64]) {
        upwind_first_into(u, self.grid.dx(), out)
    }

    fn apply_ftilde(&self, u: &[f64], out: &mut [f64]) {
        downwind_first_into(u, self.grid.dx(), out)
    }

    fn dt_fe(&self, _u: &[f64]) -> f64 {
        self.grid.dx()
    }

    fn linear_matrices(&self) -> Option<(DMatrix<f64>, DMatrix<f64>)> {
        Some(first_order_matrices(&self.grid))
    }

    fn name(&self) -> String {
        "first-order advection".into()
    }
}

/// WENO5 upwind/downwind pair for `u_t + u_x = 0`.
#[derive(Debug, Clone)]
pub struct Weno5Advection {
    pub grid: PeriodicGrid,
}

impl Weno5Advection {
    pub fn new(grid: PeriodicGrid) -> Result<Self> {
        check_weno_grid(&grid)?;
        Ok(Weno5Advection { grid })
    }
}

impl SemiDiscretization for Weno5Advection {
    fn size(&self) -> usize {
        self.grid.len()
    }

    fn apply_f(&self, u: &[f64], out: &mut [f64]) {
        weno5_advection_into(u, self.grid.dx(), Direction::Upwind, out)
    }

    fn apply_ftilde(&self, u: &[f64], out: &mut [f64]) {
        weno5_advection_into(u, self.grid.dx(), Direction::Downwind, out)
    }

    fn dt_fe(&self, _u: &[f64]) -> f64 {
        self.grid.dx()
    }

    fn name(&self) -> String {
        "WENO5 advection".into()
    }
}

/// WENO5 pair for Burgers' equation with Lax–Friedrichs splitting.
#[derive(Debug, Clone)]
pub struct Weno5Burgers {
    pub grid: PeriodicGrid,
}

impl Weno5Burgers {
    pub fn new(grid: PeriodicGrid) -> Result<Self> {
        check_weno_grid(&grid)?;
        Ok(Weno5Burgers { grid })
    }
}

impl SemiDiscretization for Weno5Burgers {
    fn size(&self) -> usize {
        self.grid.len()
    }

    fn apply_f(&self, u: &[f64], out: &mut [f64]) {
        weno5_burgers_into(u, self.grid.dx(), Direction::Upwind, out)
    }

    fn apply_ftilde(&self, u: &[f64], out: &mut [f64]) {
        weno5_burgers_into(u, self.grid.dx(), Direction::Downwind, out)
    }

    /// `dx / max|u|`.
    fn dt_fe(&self, u: &[f64]) -> f64 {
        let alpha = u.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if alpha > 0.0 {
            self.grid.dx() / alpha
        } else {
            self.grid.dx()
        }
    }

    fn name(&self) -> String {
        "WENO5 Burgers".into()
    }
}

fn check_weno_grid(grid: &PeriodicGrid) -> Result<()> {
    if grid.len() < 5 {
        return Err(Error::domain(format!(
            "WENO5 needs at least 5 cells, got {}",
            grid.len()
        )));
    }
    Ok(())
}

/// An arbitrary linear pair given by its matrices.
#[derive(Debug, Clone)]
pub struct LinearPair {
    l: DMatrix<f64>,
    ltilde: DMatrix<f64>,
    dt_fe: f64,
}

impl LinearPair {
    /// `F(u) = L u`, `F̃(u) = -L̃ u`.
    pub fn new(l: DMatrix<f64>, ltilde: DMatrix<f64>, dt_fe: f64) -> Result<Self> {
        if !l.is_square() || l.shape() != ltilde.shape() {
            return Err(Error::Dimension(
                "operator matrices must be square and equal in size".into(),
            ));
        }
        Ok(LinearPair { l, ltilde, dt_fe })
    }

    /// The pair with `F̃ = -F` exactly, under which any downwind method acts
    /// as its underlying method.
    pub fn underlying(l: DMatrix<f64>, dt_fe: f64) -> Result<Self> {
        let lt = l.clone();
        Self::new(l, lt, dt_fe)
    }
}

impl SemiDiscretization for LinearPair {
    fn size(&self) -> usize {
        self.l.nrows()
    }

    fn apply_f(&self, u: &[f64], out: &mut [f64]) {
        let v = &self.l * DVector::from_column_slice(u);
        out.copy_from_slice(v.as_slice());
    }

    fn apply_ftilde(&self, u: &[f64], out: &mut [f64]) {
        let v = -(&self.ltilde * DVector::from_column_slice(u));
        out.copy_from_slice(v.as_slice());
    }

    fn dt_fe(&self, _u: &[f64]) -> f64 {
        self.dt_fe
    }

    fn linear_matrices(&self) -> Option<(DMatrix<f64>, DMatrix<f64>)> {
        Some((self.l.clone(), self.ltilde.clone()))
    }

    fn name(&self) -> String {
        "linear pair".into()
    }
}

/// Operator matrices of a spatial scheme; only the first-order scheme is
/// linear.
pub fn operator_matrices(
    scheme: SpatialScheme,
    grid: &PeriodicGrid,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    match scheme {
        SpatialScheme::FirstOrder => Ok(first_order_matrices(grid)),
        SpatialScheme::Weno5 => Err(Error::NonlinearScheme),
    }
}
