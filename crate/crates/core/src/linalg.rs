//! Symmetric positive-definite quadratic forms, stored either as a diagonal
//! or as a dense matrix with its Cholesky factor.

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone)]
pub enum SpdMatrix {
    Diagonal(Vec<f64>),
    Dense {
        matrix: DMatrix<f64>,
        /// Upper-triangular `Lᵀ` where `matrix = L Lᵀ`.
        upper: DMatrix<f64>,
    },
}

impl SpdMatrix {
    pub fn identity(dim: usize) -> Self {
        SpdMatrix::Diagonal(vec![1.0; dim])
    }

    pub fn diagonal(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(invalid("empty diagonal"));
        }
        if entries.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(SpdMatrix::Diagonal(entries))
    }

    /// Dense matrix from rows. Fails unless square, symmetric and positive definite.
    pub fn dense(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(invalid("matrix must be square and non-empty"));
        }
        let matrix = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("matrix"));
        }
        for i in 0..n {
            for j in 0..i {
                let (a, b) = (matrix[(i, j)], matrix[(j, i)]);
                if (a - b).abs() > 1e-12 * (1.0 + a.abs().max(b.abs())) {
                    return Err(Error::NotPositiveDefinite);
                }
            }
        }
        let chol = matrix.clone().cholesky().ok_or(Error::NotPositiveDefinite)?;
        let upper = chol.l().transpose();
        Ok(SpdMatrix::Dense { matrix, upper })
    }

    pub fn dim(&self) -> usize {
        match self {
            SpdMatrix::Diagonal(d) => d.len(),
            SpdMatrix::Dense { matrix, .. } => matrix.nrows(),
        }
    }

    /// `out = A v`.
    pub fn apply(&self, v: &[f64], out: &mut [f64]) {
        match self {
            SpdMatrix::Diagonal(d) => {
                for ((o, a), x) in out.iter_mut().zip(d).zip(v) {
                    *o = a * x;
                }
            }
            SpdMatrix::Dense { matrix, .. } => {
                let n = matrix.nrows();
                for (i, o) in out.iter_mut().enumerate() {
                    let mut acc = 0.0;
                    for j in 0..n {
                        acc += matrix[(i, j)] * v[j];
                    }
                    *o = acc;
                }
            }
        }
    }

    /// `vᵀ A v / 2`.
    pub fn half_quadratic(&self, v: &[f64]) -> f64 {
        match self {
            SpdMatrix::Diagonal(d) => 0.5 * d.iter().zip(v).map(|(a, x)| a * x * x).sum::<f64>(),
            SpdMatrix::Dense { matrix, .. } => {
                let n = matrix.nrows();
                let mut acc = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        acc += v[i] * matrix[(i, j)] * v[j];
                    }
                }
                0.5 * acc
            }
        }
    }

    /// Maps standard normal `z` to a draw with covariance `A⁻¹`, in place.
    pub fn whiten_inverse(&self, z: &mut [f64]) {
        match self {
            SpdMatrix::Diagonal(d) => {
                for (zi, a) in z.iter_mut().zip(d) {
                    *zi /= a.sqrt();
                }
            }
            SpdMatrix::Dense { upper, .. } => {
                let rhs = DVector::from_column_slice(z);
                // Lᵀ p = z gives Cov(p) = (L Lᵀ)⁻¹.
                let p = upper
                    .solve_upper_triangular(&rhs)
                    .expect("cholesky factor has a positive diagonal");
                z.copy_from_slice(p.as_slice());
            }
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        match self {
            SpdMatrix::Diagonal(d) => (0..n)
                .map(|i| (0..n).map(|j| if i == j { d[i] } else { 0.0 }).collect())
                .collect(),
            SpdMatrix::Dense { matrix, .. } => {
                (0..n).map(|i| (0..n).map(|j| matrix[(i, j)]).collect()).collect()
            }
        }
    }
}
