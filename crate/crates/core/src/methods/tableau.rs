use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Butcher-style coefficients of a downwind Runge–Kutta method.
///
/// Stage `i` reads `y_i = u + dt Σ_j a_ij F(y_j) + dt Σ_j ã_ij F̃(y_j)` and the
/// update is `u + dt Σ_j b_j F(y_j) + dt Σ_j b̃_j F̃(y_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "TableauDoc", try_from = "TableauDoc")]
pub struct DownwindTableau {
    a: DMatrix<f64>,
    atilde: DMatrix<f64>,
    b: DVector<f64>,
    btilde: DVector<f64>,
    c: DVector<f64>,
}

impl DownwindTableau {
    /// Builds a tableau; the abscissae are computed as `c = (A - Ã) 1`.
    pub fn new(
        a: DMatrix<f64>,
        atilde: DMatrix<f64>,
        b: DVector<f64>,
        btilde: DVector<f64>,
    ) -> Result<Self> {
        let s = a.nrows();
        if s == 0 {
            return Err(Error::Dimension("tableau needs at least one stage".into()));
        }
        if a.ncols() != s || atilde.shape() != (s, s) || b.len() != s || btilde.len() != s {
            return Err(Error::Dimension(format!(
                "stage count {s}: A {:?}, Atilde {:?}, b {}, btilde {}",
                a.shape(),
                atilde.shape(),
                b.len(),
                btilde.len()
            )));
        }
        let c = (&a - &atilde) * DVector::from_element(s, 1.0);
        Ok(DownwindTableau {
            a,
            atilde,
            b,
            btilde,
            c,
        })
    }

    /// An ordinary (non-downwind) method: `Ã = 0`, `b̃ = 0`.
    pub fn classical(a: DMatrix<f64>, b: DVector<f64>) -> Result<Self> {
        let s = a.nrows();
        Self::new(a, DMatrix::zeros(s, s), b, DVector::zeros(s))
    }

    pub fn from_rows(a: &[&[f64]], atilde: &[&[f64]], b: &[f64], btilde: &[f64]) -> Result<Self> {
        Self::new(
            rows_to_matrix(a)?,
            rows_to_matrix(atilde)?,
            DVector::from_column_slice(b),
            DVector::from_column_slice(btilde),
        )
    }

    pub fn stages(&self) -> usize {
        self.a.nrows()
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn atilde(&self) -> &DMatrix<f64> {
        &self.atilde
    }

    pub fn b(&self) -> &DVector<f64> {
        &self.b
    }

    pub fn btilde(&self) -> &DVector<f64> {
        &self.btilde
    }

    pub fn c(&self) -> &DVector<f64> {
        &self.c
    }

    /// `a_ij = ã_ij = 0` for all `j >= i`.
    pub fn is_explicit(&self) -> bool {
        let s = self.stages();
        (0..s).all(|i| (i..s).all(|j| self.a[(i, j)] == 0.0 && self.atilde[(i, j)] == 0.0))
    }

    /// True when no downwind operator evaluations are needed.
    pub fn is_classical(&self) -> bool {
        self.atilde.iter().all(|&x| x == 0.0) && self.btilde.iter().all(|&x| x == 0.0)
    }

    /// `A` stacked over `bᵀ`, shape `(s+1) × s`.
    pub fn a_extended(&self) -> DMatrix<f64> {
        stack(&self.a, &self.b)
    }

    /// `Ã` stacked over `b̃ᵀ`, shape `(s+1) × s`.
    pub fn atilde_extended(&self) -> DMatrix<f64> {
        stack(&self.atilde, &self.btilde)
    }

    /// Largest entrywise difference over all coefficient arrays.
    pub fn max_abs_diff(&self, other: &DownwindTableau) -> f64 {
        if self.stages() != other.stages() {
            return f64::INFINITY;
        }
        let d = |x: &[f64], y: &[f64]| {
            x.iter()
                .zip(y)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        };
        [
            d(self.a.as_slice(), other.a.as_slice()),
            d(self.atilde.as_slice(), other.atilde.as_slice()),
            d(self.b.as_slice(), other.b.as_slice()),
            d(self.btilde.as_slice(), other.btilde.as_slice()),
            d(self.c.as_slice(), other.c.as_slice()),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn stack(m: &DMatrix<f64>, row: &DVector<f64>) -> DMatrix<f64> {
    let s = m.nrows();
    let mut out = DMatrix::zeros(s + 1, s);
    out.rows_mut(0, s).copy_from(m);
    out.row_mut(s).copy_from(&row.transpose());
    out
}

pub(crate) fn rows_to_matrix(rows: &[impl AsRef<[f64]>]) -> Result<DMatrix<f64>> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.as_ref().len());
    if rows.iter().any(|r| r.as_ref().len() != ncols) {
        return Err(Error::Dimension("ragged matrix rows".into()));
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| rows[i].as_ref()[j]))
}

pub(crate) fn matrix_to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| m.row(i).iter().copied().collect())
        .collect()
}

/// JSON layout: `{"s", "A", "Atilde", "b", "btilde", "c"}` with row-major arrays.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableauDoc {
    s: usize,
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
    #[serde(rename = "Atilde")]
    atilde: Vec<Vec<f64>>,
    b: Vec<f64>,
    btilde: Vec<f64>,
    c: Vec<f64>,
}

impl From<DownwindTableau> for TableauDoc {
    fn from(t: DownwindTableau) -> Self {
        TableauDoc {
            s: t.stages(),
            a: matrix_to_rows(&t.a),
            atilde: matrix_to_rows(&t.atilde),
            b: t.b.iter().copied().collect(),
            btilde: t.btilde.iter().copied().collect(),
            c: t.c.iter().copied().collect(),
        }
    }
}

impl TryFrom<TableauDoc> for DownwindTableau {
    type Error = Error;

    fn try_from(doc: TableauDoc) -> Result<Self> {
        if doc.a.len() != doc.s || doc.c.len() != doc.s {
            return Err(Error::Dimension(format!(
                "field \"s\" = {} but \"A\" has {} rows and \"c\" has {} entries",
                doc.s,
                doc.a.len(),
                doc.c.len()
            )));
        }
        let t = DownwindTableau::new(
            rows_to_matrix(&doc.a)?,
            rows_to_matrix(&doc.atilde)?,
            DVector::from_vec(doc.b),
            DVector::from_vec(doc.btilde),
        )?;
        for (i, (given, computed)) in doc.c.iter().zip(t.c.iter()).enumerate() {
            if (given - computed).abs() > 1e-10 * (1.0 + computed.abs()) {
                return Err(Error::Dimension(format!(
                    "field \"c\"[{i}] = {given} but the row sum of A - Atilde is {computed}"
                )));
            }
        }
        Ok(t)
    }
}
