use nalgebra::DMatrix;

use super::grid::{GridFunction, PeriodicGrid};

/// `F_i(u) = -(u_i - u_{i-1}) / dx`.
pub fn upwind_first_into(u: &[f64], dx: f64, out: &mut [f64]) {
    let n = u.len();
    for i in 0..n {
        let prev = if i == 0 { u[n - 1] } else { u[i - 1] };
        out[i] = -(u[i] - prev) / dx;
    }
}

/// `F̃_i(u) = (u_{i+1} - u_i) / dx`, so that `-F̃` is the downwind difference
/// approximation of `-u_x`.
pub fn downwind_first_into(u: &[f64], dx: f64, out: &mut [f64]) {
    let n = u.len();
    for i in 0..n {
        let next = if i + 1 == n { u[0] } else { u[i + 1] };
        out[i] = (next - u[i]) / dx;
    }
}

pub fn upwind_first(u: &GridFunction) -> GridFunction {
    let mut out = vec![0.0; u.values().len()];
    upwind_first_into(u.values(), u.grid().dx(), &mut out);
    u.with_values(out)
}

pub fn downwind_first(u: &GridFunction) -> GridFunction {
    let mut out = vec![0.0; u.values().len()];
    downwind_first_into(u.values(), u.grid().dx(), &mut out);
    u.with_values(out)
}

/// Circulant matrices `(L, L̃)` with `F(u) = L u` and `F̃(u) = -L̃ u`.
///
/// `L` has `-1` on the diagonal and `+1` on the periodic subdiagonal; `L̃` has
/// `+1` on the diagonal and `-1` on the periodic superdiagonal. Both carry
/// the factor `1/dx`.
pub fn first_order_matrices(grid: &PeriodicGrid) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = grid.len();
    let inv = 1.0 / grid.dx();
    let mut l = DMatrix::zeros(n, n);
    let mut lt = DMatrix::zeros(n, n);
    for i in 0..n {
        l[(i, i)] -= inv;
        l[(i, (i + n - 1) % n)] += inv;
        lt[(i, i)] += inv;
        lt[(i, (i + 1) % n)] -= inv;
    }
    (l, lt)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_applied_stencils() {
        let g = PeriodicGrid::new(4).unwrap();
        let u = GridFunction::new(g, vec![0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(upwind_first(&u).values(), &[0.0, -4.0, 4.0, 0.0]);
        assert_eq!(downwind_first(&u).values(), &[4.0, -4.0, 0.0, 0.0]);
        let c = g.sample(|_| 2.5);
        assert!(upwind_first(&c).values().iter().all(|&x| x == 0.0));
        assert!(downwind_first(&c).values().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn matrices_match_stencils() {
        let g = PeriodicGrid::new(3).unwrap();
        let (l, lt) = first_order_matrices(&g);
        let ones = nalgebra::DVector::from_element(3, 1.0);
        assert_eq!((&l * &ones).amax(), 0.0);
        assert_eq!((&lt * &ones).amax(), 0.0);
        // L - L̃ is the periodic (1, -2, 1)/dx stencil
        let d = &l - &lt;
        for i in 0..3 {
            assert_eq!(d[(i, i)], -6.0);
            assert_eq!(d[(i, (i + 1) % 3)], 3.0);
            assert_eq!(d[(i, (i + 2) % 3)], 3.0);
        }
    }
}
