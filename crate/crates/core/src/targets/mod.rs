//! Target potentials used by the examples and experiments.

mod ginzburg;
mod noisy;
mod quantile;

pub use ginzburg::GinzburgLandauTarget;
pub use noisy::{wrap_noisy, NoisyGradient};
pub use quantile::{smoothed_pinball_loss, QuantileData, QuantileRegressionTarget};

use crate::error::{invalid, Result};
use crate::linalg::SpdMatrix;
use crate::model::Potential;

/// `U(x) = xᵀ P x / 2` for a precision matrix `P`.
#[derive(Debug, Clone)]
pub struct GaussianTarget {
    precision: SpdMatrix,
}

impl GaussianTarget {
    pub fn new(precision: SpdMatrix) -> Self {
        Self { precision }
    }

    pub fn standard(dim: usize) -> Self {
        Self::new(SpdMatrix::identity(dim))
    }

    pub fn precision(&self) -> &SpdMatrix {
        &self.precision
    }
}

impl Potential for GaussianTarget {
    fn dim(&self) -> usize {
        self.precision.dim()
    }
    fn value(&self, x: &[f64]) -> f64 {
        self.precision.half_quadratic(x)
    }
    fn gradient_into(&self, x: &[f64], out: &mut [f64]) {
        self.precision.apply(x, out)
    }
}

/// `U(x) = Σ |x_i|^α / α` with `α > 1`.
#[derive(Debug, Clone)]
pub struct ExpPowerTarget {
    dim: usize,
    alpha: f64,
}

impl ExpPowerTarget {
    pub fn new(dim: usize, alpha: f64) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dimension must be positive"));
        }
        if !(alpha.is_finite() && alpha > 1.0) {
            return Err(invalid(format!("alpha must exceed 1, got {alpha}")));
        }
        Ok(Self { dim, alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

impl Potential for ExpPowerTarget {
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, x: &[f64]) -> f64 {
        x.iter().map(|v| v.abs().powf(self.alpha)).sum::<f64>() / self.alpha
    }
    fn gradient_into(&self, x: &[f64], out: &mut [f64]) {
        for (o, &v) in out.iter_mut().zip(x) {
            *o = if v == 0.0 { 0.0 } else { v.signum() * v.abs().powf(self.alpha - 1.0) };
        }
    }
}

/// One-dimensional double well, `U(x) = C(a x⁴ − b x²)`.
#[derive(Debug, Clone)]
pub struct DoubleWellTarget {
    c: f64,
    a: f64,
    b: f64,
}

impl DoubleWellTarget {
    pub fn new(c: f64, a: f64, b: f64) -> Result<Self> {
        for (name, v) in [("C", c), ("a", a), ("b", b)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(format!("double well {name} must be positive, got {v}")));
            }
        }
        Ok(Self { c, a, b })
    }
}

impl Potential for DoubleWellTarget {
    fn dim(&self) -> usize {
        1
    }
    fn value(&self, x: &[f64]) -> f64 {
        let t = x[0];
        self.c * (self.a * t.powi(4) - self.b * t * t)
    }
    fn gradient_into(&self, x: &[f64], out: &mut [f64]) {
        let t = x[0];
        out[0] = self.c * (4.0 * self.a * t.powi(3) - 2.0 * self.b * t);
    }
}

/// Ten-dimensional funnel: `x_i | ν ~ N(0, e^ν)` for nine `x_i`, `ν ~ N(0, 9)`.
///
/// Coordinates are `(x_1, …, x_9, ν)` and
/// `U = ν²/18 + 9ν/2 + e^{−ν} Σ x_i² / 2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct FunnelTarget;

impl FunnelTarget {
    pub const DIM: usize = 10;
}

impl Potential for FunnelTarget {
    fn dim(&self) -> usize {
        Self::DIM
    }
    fn value(&self, x: &[f64]) -> f64 {
        let nu = x[9];
        let ss: f64 = x[..9].iter().map(|v| v * v).sum();
        nu * nu / 18.0 + 4.5 * nu + 0.5 * (-nu).exp() * ss
    }
    fn gradient_into(&self, x: &[f64], out: &mut [f64]) {
        let nu = x[9];
        let scale = (-nu).exp();
        let mut ss = 0.0;
        for i in 0..9 {
            out[i] = x[i] * scale;
            ss += x[i] * x[i];
        }
        out[9] = nu / 9.0 + 4.5 - 0.5 * scale * ss;
    }
}
