use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use super::tableau::DownwindTableau;
use crate::error::{Error, Result};
use crate::poly::{self, Poly};

/// The ordinary RK method obtained by substituting `F̃ = -F`.
pub fn underlying_method(t: &DownwindTableau) -> DownwindTableau {
    DownwindTableau::classical(t.a() - t.atilde(), t.b() - t.btilde())
        .expect("dimensions already validated")
}

/// Classical order-condition residuals of the underlying method.
///
/// Ordered as `Σb - 1`, `bᵀc - 1/2`, `bᵀc² - 1/3`, `bᵀAc - 1/6`, truncated to
/// the conditions of order at most `p`.
pub fn rk_order_residuals(t: &DownwindTableau, p: usize) -> Result<Vec<f64>> {
    if p == 0 || p > 3 {
        return Err(Error::UnsupportedOrder(p));
    }
    let u = underlying_method(t);
    let (a, b, c) = (u.a(), u.b(), u.c());
    let mut res = vec![b.sum() - 1.0];
    if p >= 2 {
        res.push(b.dot(c) - 0.5);
    }
    if p >= 3 {
        res.push(b.dot(&c.component_mul(c)) - 1.0 / 3.0);
        res.push(b.dot(&(a * c)) - 1.0 / 6.0);
    }
    Ok(res)
}

/// Largest `p <= 3` for which all residuals vanish within `tol`; 0 if the
/// method is not even consistent.
pub fn observed_order(t: &DownwindTableau, tol: f64) -> usize {
    (1..=3)
        .take_while(|&p| {
            rk_order_residuals(t, p)
                .map(|r| r.iter().all(|x| x.abs() <= tol))
                .unwrap_or(false)
        })
        .last()
        .unwrap_or(0)
}

/// `ψ(z) = N(z) / D(z)` with coefficients in ascending powers of `z`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RationalStabilityFunction {
    pub numerator: Vec<f64>,
    pub denominator: Vec<f64>,
}

impl RationalStabilityFunction {
    pub fn new(numerator: Vec<f64>, denominator: Vec<f64>) -> Self {
        RationalStabilityFunction {
            numerator,
            denominator,
        }
    }

    /// `lim |z|→∞ |ψ(z)|`; infinite when the numerator has higher degree.
    pub fn limit_at_infinity(&self) -> f64 {
        let n = Poly(self.numerator.clone());
        let d = Poly(self.denominator.clone());
        match n.degree().cmp(&d.degree()) {
            std::cmp::Ordering::Less => 0.0,
            std::cmp::Ordering::Greater => f64::INFINITY,
            std::cmp::Ordering::Equal => (n.coeffs()[n.degree()] / d.coeffs()[d.degree()]).abs(),
        }
    }
}

/// Stability function of the underlying method,
/// `ψ(z) = det(I - zA + z 1 bᵀ) / det(I - zA)`, by exact cofactor expansion
/// over polynomials in `z`.
pub fn stability_function(t: &DownwindTableau) -> RationalStabilityFunction {
    let u = underlying_method(t);
    let s = u.stages();
    let a = u.a();
    let b = u.b();
    let build = |with_b: bool| -> Vec<Vec<Poly>> {
        (0..s)
            .map(|i| {
                (0..s)
                    .map(|j| {
                        let delta = if i == j { 1.0 } else { 0.0 };
                        let extra = if with_b { b[j] } else { 0.0 };
                        Poly::linear(delta, extra - a[(i, j)])
                    })
                    .collect()
            })
            .collect()
    };
    let num = poly::det(&build(true)).trimmed();
    let den = poly::det(&build(false)).trimmed();
    RationalStabilityFunction::new(num.0, den.0)
}

/// Evaluates `ψ(z)`, failing near a pole.
pub fn evaluate_psi(f: &RationalStabilityFunction, z: Complex64) -> Result<Complex64> {
    let n = Poly(f.numerator.clone());
    let d = Poly(f.denominator.clone());
    let dz = d.eval(z);
    if dz.norm() < 1e-14 * d.term_scale(z) || dz.norm() == 0.0 {
        return Err(Error::Pole { re: z.re, im: z.im });
    }
    Ok(n.eval(z) / dz)
}

/// Evaluates `ψ` at a matrix argument: `D(M)⁻¹ N(M)`.
pub fn evaluate_psi_matrix(
    f: &RationalStabilityFunction,
    m: &DMatrix<f64>,
) -> Result<DMatrix<f64>> {
    let horner = |coeffs: &[f64]| {
        let n = m.nrows();
        coeffs
            .iter()
            .rev()
            .fold(DMatrix::zeros(n, n), |acc: DMatrix<f64>, &c| {
                &acc * m + DMatrix::identity(n, n) * c
            })
    };
    let num = horner(&f.numerator);
    let den = horner(&f.denominator);
    let lu = den.lu();
    lu.solve(&num).ok_or(Error::SingularMatrix {
        min_sv: 0.0,
        max_sv: 0.0,
    })
}

/// Applies the tableau's stage equations to the scalar test problem
/// `F(y) = λy`, `F̃(y) = λ̃y` and returns the amplification factor. Used as an
/// independent route to the stability function.
pub fn amplification_factor(t: &DownwindTableau, z: Complex64, zt: Complex64) -> Option<Complex64> {
    let s = t.stages();
    let m = DMatrix::from_fn(s, s, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        Complex64::new(delta, 0.0) - z * t.a()[(i, j)] - zt * t.atilde()[(i, j)]
    });
    let y = m
        .lu()
        .solve(&DVector::from_element(s, Complex64::new(1.0, 0.0)))?;
    let mut out = Complex64::new(1.0, 0.0);
    for j in 0..s {
        out += (z * t.b()[j] + zt * t.btilde()[j]) * y[j];
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::methods::{catalog, make_optimal_family, shu_osher_to_butcher};

    fn family8() -> DownwindTableau {
        shu_osher_to_butcher(&make_optimal_family(8.0).unwrap()).unwrap()
    }

    #[test]
    fn underlying_of_family() {
        let u = underlying_method(&family8());
        let a = u.a();
        assert!((a[(0, 0)] - 23.0 / 8.0).abs() < 1e-12);
        assert!((a[(0, 1)] + 17.0 / 8.0).abs() < 1e-12);
        assert!((a[(1, 0)] - 3.0).abs() < 1e-12);
        assert!((a[(1, 1)] + 17.0 / 8.0).abs() < 1e-12);
        // (4 - r)/2 at r = 8
        assert!((u.b()[0] - 3.0).abs() < 1e-12);
        assert!((u.b()[1] + 2.0).abs() < 1e-12);
        assert!(u.is_classical());
    }

    #[test]
    fn underlying_is_identity_on_classical_and_cancels_symmetric() {
        let t = catalog::ssprk33();
        assert_eq!(underlying_method(&t), t);
        let sym = DownwindTableau::new(t.a().clone(), t.a().clone(), t.b().clone(), t.b().clone())
            .unwrap();
        let u = underlying_method(&sym);
        assert!(u.a().iter().chain(u.b().iter()).all(|&x| x == 0.0));
    }

    #[test]
    fn order_residuals() {
        let r = rk_order_residuals(&family8(), 2).unwrap();
        assert!(r.iter().all(|x| x.abs() < 1e-12), "{r:?}");
        let r3 = rk_order_residuals(&family8(), 3).unwrap();
        assert!(r3[2..].iter().any(|x| x.abs() > 1e-3), "{r3:?}");
        let fe = rk_order_residuals(&catalog::forward_euler(), 2).unwrap();
        assert_eq!(fe, vec![0.0, -0.5]);
        assert!(matches!(
            rk_order_residuals(&family8(), 4),
            Err(Error::UnsupportedOrder(4))
        ));
        assert_eq!(observed_order(&catalog::ssprk33(), 1e-12), 3);
        assert_eq!(observed_order(&family8(), 1e-12), 2);
    }

    #[test]
    fn family_stability_function() {
        let f = stability_function(&family8());
        let z = Complex64::new(-1.0, 0.0);
        let v = evaluate_psi(&f, z).unwrap();
        assert!((v.re - 0.765625 / 2.015625).abs() < 1e-12);
        let one = evaluate_psi(&f, Complex64::new(0.0, 0.0)).unwrap();
        assert!((one.re - 1.0).abs() < 1e-15);
        assert!((f.limit_at_infinity() - 1.0 / 17.0).abs() < 1e-12);
        assert_eq!(f.numerator.len(), 3);
        assert_eq!(f.denominator.len(), 3);
    }

    #[test]
    fn forward_euler_stability_function() {
        let f = stability_function(&catalog::forward_euler());
        assert_eq!(f.numerator, vec![1.0, 1.0]);
        assert_eq!(f.denominator, vec![1.0]);
        assert!(f.limit_at_infinity().is_infinite());
    }

    #[test]
    fn pole_is_reported() {
        // backward Euler: ψ = 1/(1-z)
        let f = stability_function(&catalog::backward_euler());
        assert!(matches!(
            evaluate_psi(&f, Complex64::new(1.0, 0.0)),
            Err(Error::Pole { .. })
        ));
    }

    #[test]
    fn determinant_route_matches_stage_solve() {
        let t = family8();
        let f = stability_function(&t);
        for &(re, im) in &[(-0.3, 2.0), (1.5, -0.7), (-40.0, 3.0)] {
            let z = Complex64::new(re, im);
            let a = evaluate_psi(&f, z).unwrap();
            let b = amplification_factor(&t, z, -z).unwrap();
            assert!((a - b).norm() < 1e-12 * (1.0 + a.norm()));
        }
    }
}
