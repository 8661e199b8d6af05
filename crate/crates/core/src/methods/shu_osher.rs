use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::tableau::{matrix_to_rows, rows_to_matrix, DownwindTableau};
use crate::error::{Error, Result};

/// Entries at or above this are accepted as nonnegative.
pub const NONNEGATIVE_TOL: f64 = 1e-12;

/// Relative singular-value cutoff used when inverting `I - P' - P̃'`.
pub const SINGULAR_TOL: f64 = 1e-12;

/// Shu–Osher form of a downwind RK method at parameter `r`:
///
/// ```text
/// y_i = v_i u + Σ_j p_ij (y_j + dt/r F(y_j)) + Σ_j p̃_ij (y_j + dt/r F̃(y_j))
/// ```
///
/// Rows `0..s` are stages, row `s` is the update. Nonnegative coefficients
/// certify a downwind SSP coefficient of at least `r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "ShuOsherDoc", try_from = "ShuOsherDoc")]
pub struct ShuOsherRep {
    r: f64,
    v: DVector<f64>,
    p: DMatrix<f64>,
    ptilde: DMatrix<f64>,
}

impl ShuOsherRep {
    pub fn new(r: f64, v: DVector<f64>, p: DMatrix<f64>, ptilde: DMatrix<f64>) -> Result<Self> {
        let s = p.ncols();
        if s == 0 || p.nrows() != s + 1 || ptilde.shape() != p.shape() || v.len() != s + 1 {
            return Err(Error::Dimension(format!(
                "Shu-Osher arrays: v {}, P {:?}, Ptilde {:?}",
                v.len(),
                p.shape(),
                ptilde.shape()
            )));
        }
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::domain(format!(
                "r must be finite and nonnegative, got {r}"
            )));
        }
        Ok(ShuOsherRep { r, v, p, ptilde })
    }

    /// Builds a representation whose `v` is fixed by row-sum consistency.
    pub fn from_coefficients(r: f64, p: DMatrix<f64>, ptilde: DMatrix<f64>) -> Result<Self> {
        let v = DVector::from_fn(p.nrows(), |i, _| 1.0 - p.row(i).sum() - ptilde.row(i).sum());
        Self::new(r, v, p, ptilde)
    }

    pub fn stages(&self) -> usize {
        self.p.ncols()
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn v(&self) -> &DVector<f64> {
        &self.v
    }

    pub fn p(&self) -> &DMatrix<f64> {
        &self.p
    }

    pub fn ptilde(&self) -> &DMatrix<f64> {
        &self.ptilde
    }

    /// Largest `|v_i + Σ_j (p_ij + p̃_ij) - 1|` over all rows.
    pub fn consistency_defect(&self) -> f64 {
        (0..=self.stages())
            .map(|i| (self.v[i] + self.p.row(i).sum() + self.ptilde.row(i).sum() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn min_entry(&self) -> f64 {
        self.v
            .iter()
            .chain(self.p.iter())
            .chain(self.ptilde.iter())
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// All coefficients nonnegative (to within [`NONNEGATIVE_TOL`]).
    pub fn is_certificate(&self) -> bool {
        self.min_entry() >= -NONNEGATIVE_TOL
    }

    /// Stage rows of `P` and `P̃` are strictly lower triangular.
    pub fn is_explicit(&self) -> bool {
        let s = self.stages();
        (0..s).all(|i| (i..s).all(|j| self.p[(i, j)] == 0.0 && self.ptilde[(i, j)] == 0.0))
    }
}

/// The two-stage, second-order downwind family with downwind SSP coefficient `r`.
///
/// ```text
/// y1 = 2/(r(r-2)) u + 2/r (y1 + dt/r F(y1)) + (r²-4r+2)/(r(r-2)) (y2 + dt/r F̃(y2))
/// y2 = y1 + dt/r F(y1)
/// u' = y2 + dt/r F(y2)
/// ```
pub fn make_optimal_family(r: f64) -> Result<ShuOsherRep> {
    let r_min = 2.0 + std::f64::consts::SQRT_2;
    if !(r > r_min) || !r.is_finite() {
        return Err(Error::domain(format!(
            "family parameter must satisfy r > 2 + sqrt(2) ~ {r_min:.6}, got {r}"
        )));
    }
    let denom = r * (r - 2.0);
    let mut p = DMatrix::zeros(3, 2);
    let mut ptilde = DMatrix::zeros(3, 2);
    p[(0, 0)] = 2.0 / r;
    ptilde[(0, 1)] = (r * r - 4.0 * r + 2.0) / denom;
    p[(1, 0)] = 1.0;
    p[(2, 1)] = 1.0;
    let v = DVector::from_vec(vec![2.0 / denom, 0.0, 0.0]);
    ShuOsherRep::new(r, v, p, ptilde)
}

/// Inverts `m` after checking its conditioning.
pub(crate) fn checked_inverse(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let sv = m.clone().singular_values();
    let max_sv = sv.max();
    let min_sv = sv.min();
    if !(min_sv >= SINGULAR_TOL * max_sv) || max_sv == 0.0 {
        return Err(Error::SingularMatrix { min_sv, max_sv });
    }
    m.clone()
        .try_inverse()
        .ok_or(Error::SingularMatrix { min_sv, max_sv })
}

/// Eliminates the stages of a Shu–Osher representation to recover the
/// Butcher-style tableau.
///
/// With `M = I - P' - P̃'` (stage rows only) the stages satisfy
/// `y = 1 u + dt M⁻¹ (P' F + P̃' F̃) / r`, so `A = M⁻¹P'/r` and `Ã = M⁻¹P̃'/r`.
/// Substituting into the update row with `q = p_{s+1} + p̃_{s+1}` gives
/// `b = p_{s+1}/r + qᵀA` and `b̃ = p̃_{s+1}/r + qᵀÃ`.
pub fn shu_osher_to_butcher(rep: &ShuOsherRep) -> Result<DownwindTableau> {
    let s = rep.stages();
    let r = rep.r;
    if !(r > 0.0) {
        return Err(Error::domain("conversion requires r > 0"));
    }
    let p_stage = rep.p.rows(0, s).into_owned();
    let pt_stage = rep.ptilde.rows(0, s).into_owned();
    let m = DMatrix::identity(s, s) - &p_stage - &pt_stage;
    let minv = checked_inverse(&m)?;
    let a = &minv * &p_stage / r;
    let atilde = &minv * &pt_stage / r;

    let p_last = rep.p.row(s).transpose();
    let pt_last = rep.ptilde.row(s).transpose();
    let q = &p_last + &pt_last;
    let b = &p_last / r + a.transpose() * &q;
    let btilde = &pt_last / r + atilde.transpose() * &q;
    DownwindTableau::new(a, atilde, b, btilde)
}

/// JSON layout: `{"s", "r", "v", "P", "Ptilde"}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ShuOsherDoc {
    s: usize,
    r: f64,
    v: Vec<f64>,
    #[serde(rename = "P")]
    p: Vec<Vec<f64>>,
    #[serde(rename = "Ptilde")]
    ptilde: Vec<Vec<f64>>,
}

impl From<ShuOsherRep> for ShuOsherDoc {
    fn from(rep: ShuOsherRep) -> Self {
        ShuOsherDoc {
            s: rep.stages(),
            r: rep.r,
            v: rep.v.iter().copied().collect(),
            p: matrix_to_rows(&rep.p),
            ptilde: matrix_to_rows(&rep.ptilde),
        }
    }
}

impl TryFrom<ShuOsherDoc> for ShuOsherRep {
    type Error = Error;

    fn try_from(doc: ShuOsherDoc) -> Result<Self> {
        let rep = ShuOsherRep::new(
            doc.r,
            DVector::from_vec(doc.v),
            rows_to_matrix(&doc.p)?,
            rows_to_matrix(&doc.ptilde)?,
        )?;
        if rep.stages() != doc.s {
            return Err(Error::Dimension(format!(
                "field \"s\" = {} but \"P\" has {} columns",
                doc.s,
                rep.stages()
            )));
        }
        Ok(rep)
    }
}
