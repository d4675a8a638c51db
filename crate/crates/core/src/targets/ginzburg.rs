use std::path::Path;

use crate::error::{invalid, Error, Result};
use crate::model::Potential;

/// Ginzburg–Landau field on a periodic `n × n × n` lattice.
///
/// `U(ψ) = Σ (1−τ)/2 ψ² + τα/2 ‖∇̃ψ‖² + τλ/4 ψ⁴`, where `∇̃` takes forward
/// differences along each axis with wrap-around. Sites are stored flat in
/// row-major `(i, j, k)` order.
#[derive(Debug, Clone)]
pub struct GinzburgLandauTarget {
    side: usize,
    tau: f64,
    alpha: f64,
    lambda: f64,
    // Forward neighbours along i, j, k for every site.
    forward: Vec<[usize; 3]>,
    backward: Vec<[usize; 3]>,
}

impl GinzburgLandauTarget {
    pub fn new(side: usize, tau: f64, alpha: f64, lambda: f64) -> Result<Self> {
        if side < 2 {
            return Err(invalid(format!("lattice side must be at least 2, got {side}")));
        }
        for (name, v) in [("tau", tau), ("alpha", alpha), ("lambda", lambda)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(format!("{name} must be positive, got {v}")));
            }
        }
        let n = side;
        let index = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
        let mut forward = Vec::with_capacity(n * n * n);
        let mut backward = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (ip, jp, kp) = ((i + 1) % n, (j + 1) % n, (k + 1) % n);
                    let (im, jm, km) = ((i + n - 1) % n, (j + n - 1) % n, (k + n - 1) % n);
                    forward.push([index(ip, j, k), index(i, jp, k), index(i, j, kp)]);
                    backward.push([index(im, j, k), index(i, jm, k), index(i, j, km)]);
                }
            }
        }
        Ok(Self { side, tau, alpha, lambda, forward, backward })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    /// Reads `side³` whitespace-separated values.
    pub fn load_field(&self, path: &Path) -> Result<Vec<f64>> {
        let text = std::fs::read_to_string(path)?;
        let values: Vec<f64> = text
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Data(format!("bad field value: {e}")))?;
        if values.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: values.len() });
        }
        Ok(values)
    }
}

impl Potential for GinzburgLandauTarget {
    fn dim(&self) -> usize {
        self.side * self.side * self.side
    }

    fn value(&self, psi: &[f64]) -> f64 {
        let quad = 0.5 * (1.0 - self.tau);
        let grad = 0.5 * self.tau * self.alpha;
        let quart = 0.25 * self.tau * self.lambda;
        psi.iter()
            .zip(&self.forward)
            .map(|(&v, nb)| {
                let g2: f64 = nb.iter().map(|&s| (psi[s] - v) * (psi[s] - v)).sum();
                let v2 = v * v;
                quad * v2 + grad * g2 + quart * v2 * v2
            })
            .sum()
    }

    fn gradient_into(&self, psi: &[f64], out: &mut [f64]) {
        let ta = self.tau * self.alpha;
        let tl = self.tau * self.lambda;
        for (s, o) in out.iter_mut().enumerate() {
            let v = psi[s];
            let f = &self.forward[s];
            let b = &self.backward[s];
            let neighbours = psi[f[0]] + psi[f[1]] + psi[f[2]] + psi[b[0]] + psi[b[1]] + psi[b[2]];
            *o = (1.0 - self.tau) * v + tl * v * v * v + ta * (6.0 * v - neighbours);
        }
    }
}
