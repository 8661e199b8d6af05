//! Dense univariate polynomials with real coefficients, stored in ascending
//! powers. Only the handful of ring operations needed for stability-function
//! elimination are provided.

use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn zero() -> Self {
        Poly(vec![0.0])
    }

    pub fn constant(c: f64) -> Self {
        Poly(vec![c])
    }

    /// `c0 + c1 z`
    pub fn linear(c0: f64, c1: f64) -> Self {
        Poly(vec![c0, c1])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.0
    }

    /// Degree after discarding exactly-zero leading coefficients.
    pub fn degree(&self) -> usize {
        self.0.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![0.0; n];
        for (i, c) in self.0.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.0.iter().enumerate() {
            out[i] += c;
        }
        Poly(out)
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly(self.0.iter().map(|c| c * s).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    /// Drops exactly-zero leading coefficients (keeps at least one entry).
    pub fn trimmed(mut self) -> Poly {
        let d = self.degree();
        self.0.truncate(d + 1);
        self
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.0
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Largest `|c_k| |z|^k`, the magnitude scale of the terms summed by `eval`.
    pub fn term_scale(&self, z: Complex64) -> f64 {
        let mut zk = 1.0;
        let mut best: f64 = 0.0;
        for c in &self.0 {
            best = best.max(c.abs() * zk);
            zk *= z.norm();
        }
        best
    }
}

/// Determinant of a square matrix of polynomials by cofactor expansion along
/// the first row. Exact in the ring; cost grows factorially, which is fine for
/// the stage counts used here.
pub fn det(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    match n {
        0 => Poly::constant(1.0),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = Poly::zero();
            for col in 0..n {
                if m[0][col].0.iter().all(|&c| c == 0.0) {
                    continue;
                }
                let minor: Vec<Vec<Poly>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(j, _)| *j != col)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let term = m[0][col].mul(&det(&minor));
                acc = if col % 2 == 0 {
                    acc.add(&term)
                } else {
                    acc.sub(&term)
                };
            }
            acc
        }
    }
}
