use crate::error::{Error, Result};

/// Symmetric tridiagonal operator stored by its diagonal and off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct TriDiagonalOperator {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl TriDiagonalOperator {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(crate::error::invalid("diag", "operator must have dimension >= 1"));
        }
        if off.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch {
                expected: diag.len() - 1,
                found: off.len(),
            });
        }
        Ok(Self { diag, off })
    }

    pub(crate) fn zeros(dim: usize) -> Self {
        Self {
            diag: vec![0.0; dim],
            off: vec![0.0; dim.saturating_sub(1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut [f64], &mut [f64]) {
        (&mut self.diag, &mut self.off)
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim()];
        self.apply_into(x, &mut y);
        y
    }

    pub(crate) fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        let n = self.dim();
        for i in 0..n {
            let mut v = self.diag[i] * x[i];
            if i > 0 {
                v += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                v += self.off[i] * x[i + 1];
            }
            y[i] = v;
        }
    }

    /// `x^T A x`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.apply(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// `a·self + b·other`.
    pub fn linear_combination(&self, a: f64, other: &Self, b: f64) -> Self {
        let diag = self.diag.iter().zip(&other.diag).map(|(x, y)| a * x + b * y).collect();
        let off = self.off.iter().zip(&other.off).map(|(x, y)| a * x + b * y).collect();
        Self { diag, off }
    }

    /// Row-sum norm.
    pub fn norm_inf(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i].abs();
                if i > 0 {
                    s += self.off[i - 1].abs();
                }
                if i + 1 < n {
                    s += self.off[i].abs();
                }
                s
            })
            .fold(0.0, f64::max)
    }

    /// Solve `A x = rhs` in place by symmetric Thomas elimination.
    /// `scratch` must have length `dim`.
    pub(crate) fn solve_in_place(&self, rhs: &mut [f64], scratch: &mut [f64]) -> Result<()> {
        let n = self.dim();
        if rhs.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rhs.len(),
            });
        }
        // scratch holds the LDL^T pivots
        let mut pivot = self.diag[0];
        if !(pivot > 0.0) {
            return Err(Error::NotSpd { row: 0, pivot });
        }
        scratch[0] = pivot;
        for i in 1..n {
            let l = self.off[i - 1] / scratch[i - 1];
            pivot = self.diag[i] - l * self.off[i - 1];
            if !(pivot > 0.0) {
                return Err(Error::NotSpd { row: i, pivot });
            }
            scratch[i] = pivot;
            rhs[i] -= l * rhs[i - 1];
        }
        rhs[n - 1] /= scratch[n - 1];
        for i in (0..n - 1).rev() {
            rhs[i] = (rhs[i] - self.off[i] * rhs[i + 1]) / scratch[i];
        }
        Ok(())
    }
}

/// Solve `A x = rhs` for symmetric positive definite tridiagonal `A`.
pub fn solve_tridiag(a: &TriDiagonalOperator, rhs: &[f64]) -> Result<Vec<f64>> {
    let mut x = rhs.to_vec();
    let mut scratch = vec![0.0; a.dim()];
    a.solve_in_place(&mut x, &mut scratch)?;
    Ok(x)
}
