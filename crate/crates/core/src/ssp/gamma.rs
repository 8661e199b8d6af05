use serde::Serialize;

use crate::error::{Error, Result};
use crate::methods::ShuOsherRep;

/// Coefficients of the one-step linear map of an explicit representation in
/// the basis `w^(j-l) w̃^l`, where `w = 1 + z/r` and `w̃ = 1 + z̃/r`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaExpansion {
    pub s: usize,
    pub r: f64,
    /// Lower-triangular: `gamma[j][l]` for `0 <= l <= j <= s`.
    pub gamma: Vec<Vec<f64>>,
}

impl GammaExpansion {
    pub fn sum(&self) -> f64 {
        self.gamma.iter().flatten().sum()
    }

    pub fn get(&self, j: usize, l: usize) -> f64 {
        self.gamma[j][l]
    }
}

/// Bivariate polynomial `Σ c[a][b] w^a w̃^b` with `a + b <= deg`.
#[derive(Clone)]
struct Bivariate(Vec<Vec<f64>>);

impl Bivariate {
    fn constant(deg: usize, c: f64) -> Self {
        let mut m = vec![vec![0.0; deg + 1]; deg + 1];
        m[0][0] = c;
        Bivariate(m)
    }

    /// `self += f * w * other` or `self += f * w̃ * other`.
    fn add_shifted(&mut self, other: &Bivariate, f: f64, tilde: bool) {
        if f == 0.0 {
            return;
        }
        let n = self.0.len();
        for a in 0..n {
            for b in 0..n {
                let c = other.0[a][b];
                if c == 0.0 {
                    continue;
                }
                let (na, nb) = if tilde { (a, b + 1) } else { (a + 1, b) };
                self.0[na][nb] += f * c;
            }
        }
    }
}

/// Forward substitution of the Shu–Osher stages for the linear problem
/// `F = L`, `F̃ = L̃`; requires an explicit representation.
pub fn amplification_gamma(rep: &ShuOsherRep) -> Result<GammaExpansion> {
    if !rep.is_explicit() {
        return Err(Error::NotExplicit);
    }
    let s = rep.stages();
    let mut stages: Vec<Bivariate> = Vec::with_capacity(s + 1);
    for i in 0..=s {
        let mut y = Bivariate::constant(s, rep.v()[i]);
        for (j, yj) in stages.iter().enumerate().take(i.min(s)) {
            y.add_shifted(yj, rep.p()[(i, j)], false);
            y.add_shifted(yj, rep.ptilde()[(i, j)], true);
        }
        stages.push(y);
    }
    let last = &stages[s];
    let gamma = (0..=s)
        .map(|j| (0..=j).map(|l| last.0[j - l][l]).collect())
        .collect();
    Ok(GammaExpansion {
        s,
        r: rep.r(),
        gamma,
    })
}

/// `Σ γ_jl (j - 2l)`: equals `r` for a first-order method and cannot exceed
/// `s` when all coefficients are nonnegative.
pub fn verify_stage_bound(g: &GammaExpansion) -> Result<f64> {
    let mut total = 0.0;
    for (j, row) in g.gamma.iter().enumerate() {
        for (l, &value) in row.iter().enumerate() {
            if value < -1e-12 {
                return Err(Error::NegativeGamma { j, l, value });
            }
            total += value * (j as f64 - 2.0 * l as f64);
        }
    }
    Ok(total)
}
