use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients of a `k`-step downwind linear multistep method:
///
/// ```text
/// u_n - dt β_k F(u_n) - dt β̃_k F̃(u_n)
///     = Σ_{j<k} α_j u_{n-k+j} + dt β_j F(u_{n-k+j}) + dt β̃_j F̃(u_{n-k+j})
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "LmmDoc", try_from = "LmmDoc")]
pub struct DownwindLmm {
    alpha: Vec<f64>,
    beta: Vec<f64>,
    betatilde: Vec<f64>,
}

impl DownwindLmm {
    pub fn new(alpha: Vec<f64>, beta: Vec<f64>, betatilde: Vec<f64>) -> Result<Self> {
        let k = alpha.len();
        if k == 0 || beta.len() != k + 1 || betatilde.len() != k + 1 {
            return Err(Error::Dimension(format!(
                "k = {k} needs alpha of length k and beta, betatilde of length k + 1 (got {}, {})",
                beta.len(),
                betatilde.len()
            )));
        }
        Ok(DownwindLmm {
            alpha,
            beta,
            betatilde,
        })
    }

    pub fn steps(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn betatilde(&self) -> &[f64] {
        &self.betatilde
    }

    pub fn is_explicit(&self) -> bool {
        let k = self.steps();
        self.beta[k] == 0.0 && self.betatilde[k] == 0.0
    }

    /// Backward Euler: `k = 1`, `α_0 = 1`, `β_1 = 1`.
    pub fn backward_euler() -> Self {
        DownwindLmm::new(vec![1.0], vec![0.0, 1.0], vec![0.0, 0.0]).unwrap()
    }

    /// Trapezoidal rule: `k = 1`, `α_0 = 1`, `β_0 = β_1 = 1/2`.
    pub fn trapezoidal() -> Self {
        DownwindLmm::new(vec![1.0], vec![0.5, 0.5], vec![0.0, 0.0]).unwrap()
    }

    pub fn forward_euler() -> Self {
        DownwindLmm::new(vec![1.0], vec![1.0, 0.0], vec![0.0, 0.0]).unwrap()
    }
}

/// `j^e` with `0^0 = 1`.
fn ipow(j: usize, e: usize) -> f64 {
    (j as f64).powi(e as i32)
}

/// Order-condition residuals for `i = 0..=p`:
/// `Σ_{j<k} α_j j^i + Σ_{j<=k} (β_j - β̃_j) i j^(i-1) - k^i`.
pub fn lmm_order_residuals(m: &DownwindLmm, p: usize) -> Vec<f64> {
    let k = m.steps();
    (0..=p)
        .map(|i| {
            let alpha_part: f64 = (0..k).map(|j| m.alpha[j] * ipow(j, i)).sum();
            let beta_part: f64 = if i == 0 {
                0.0
            } else {
                (0..=k)
                    .map(|j| (m.beta[j] - m.betatilde[j]) * i as f64 * ipow(j, i - 1))
                    .sum()
            };
            alpha_part + beta_part - ipow(k, i)
        })
        .collect()
}

/// JSON layout: `{"k", "alpha", "beta", "betatilde"}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LmmDoc {
    k: usize,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    betatilde: Vec<f64>,
}

impl From<DownwindLmm> for LmmDoc {
    fn from(m: DownwindLmm) -> Self {
        LmmDoc {
            k: m.steps(),
            alpha: m.alpha,
            beta: m.beta,
            betatilde: m.betatilde,
        }
    }
}

impl TryFrom<LmmDoc> for DownwindLmm {
    type Error = Error;

    fn try_from(doc: LmmDoc) -> Result<Self> {
        if doc.alpha.len() != doc.k {
            return Err(Error::Dimension(format!(
                "field \"k\" = {} but \"alpha\" has {} entries",
                doc.k,
                doc.alpha.len()
            )));
        }
        DownwindLmm::new(doc.alpha, doc.beta, doc.betatilde)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residuals_of_one_step_methods() {
        assert_eq!(
            lmm_order_residuals(&DownwindLmm::backward_euler(), 2),
            vec![0.0, 0.0, 1.0]
        );
        assert_eq!(
            lmm_order_residuals(&DownwindLmm::trapezoidal(), 2),
            vec![0.0, 0.0, 0.0]
        );
        let zero = DownwindLmm::new(vec![0.0], vec![0.0; 2], vec![0.0; 2]).unwrap();
        assert_eq!(lmm_order_residuals(&zero, 0), vec![-1.0]);
    }

    #[test]
    fn residuals_depend_only_on_beta_difference() {
        let a =
            DownwindLmm::new(vec![-0.5, 1.5], vec![0.2, 1.0, 0.0], vec![0.7, 0.0, 0.0]).unwrap();
        let b =
            DownwindLmm::new(vec![-0.5, 1.5], vec![0.0, 1.3, 0.0], vec![0.5, 0.3, 0.0]).unwrap();
        assert_eq!(lmm_order_residuals(&a, 3), lmm_order_residuals(&b, 3));
    }

    #[test]
    fn explicit_flag_and_json() {
        assert!(DownwindLmm::forward_euler().is_explicit());
        assert!(!DownwindLmm::trapezoidal().is_explicit());
        let text = serde_json::to_string(&DownwindLmm::trapezoidal()).unwrap();
        assert_eq!(
            text,
            r#"{"k":1,"alpha":[1.0],"beta":[0.5,0.5],"betatilde":[0.0,0.0]}"#
        );
        let bad = r#"{"k":2,"alpha":[1.0],"beta":[0.5,0.5],"betatilde":[0.0,0.0]}"#;
        assert!(serde_json::from_str::<DownwindLmm>(bad).is_err());
    }
}
