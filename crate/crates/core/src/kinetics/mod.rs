//! Kinetic energy families, their gradients and exact momentum samplers.
//!
//! All families except the dense Gaussian are product-form,
//! `K(p) = Σ k_i(p_i)`, and are sampled coordinate by coordinate.

mod ars;

pub use ars::{ars_sample, ArsEnvelope};

use rand::{Rng, RngCore};
use rand_distr::{Distribution, Gamma, StandardNormal, StudentT};

use crate::error::{invalid, Result};
use crate::linalg::SpdMatrix;
use crate::model::{check_dim, KineticEnergy};

#[derive(Debug, Clone)]
pub enum KineticFamily {
    /// `K = pᵀ A p / 2` with `A` the inverse mass matrix.
    Gaussian { inverse_mass: SpdMatrix },
    /// `K = Σ |p_i| / b`.
    Laplace { scale: f64 },
    /// `K = Σ |p_i|^β / β`, `β > 1`.
    ExponentialPower { beta: f64 },
    /// `K = Σ (ν + 1)/2 · log(1 + p_i²/ν)`.
    StudentT { dof: f64 },
    /// `K = Σ m_i c_i² (1 + p_i²/(m_i² c_i²))^{1/2}`.
    Relativistic { mass: Vec<f64>, speed: Vec<f64> },
    /// `K = Σ (1 + p_i²/γ_i)^{β/2} / β`, `β ≥ 1`.
    RelativisticPower { beta: f64, gamma: Vec<f64> },
}

/// A kinetic energy of fixed dimension.
#[derive(Debug, Clone)]
pub struct Kinetic {
    dim: usize,
    family: KineticFamily,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be positive and finite, got {v}")))
    }
}

#[inline]
fn sign(t: f64) -> f64 {
    if t > 0.0 {
        1.0
    } else if t < 0.0 {
        -1.0
    } else {
        0.0
    }
}

impl Kinetic {
    pub fn new(dim: usize, family: KineticFamily) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dimension must be positive"));
        }
        match &family {
            KineticFamily::Gaussian { inverse_mass } => check_dim(dim, inverse_mass.dim())?,
            KineticFamily::Laplace { scale } => positive("laplace scale", *scale)?,
            KineticFamily::ExponentialPower { beta } => {
                if !(beta.is_finite() && *beta > 1.0) {
                    return Err(invalid(format!("exponential power needs beta > 1, got {beta}")));
                }
            }
            KineticFamily::StudentT { dof } => positive("degrees of freedom", *dof)?,
            KineticFamily::Relativistic { mass, speed } => {
                check_dim(dim, mass.len())?;
                check_dim(dim, speed.len())?;
                for &m in mass {
                    positive("mass", m)?;
                }
                for &c in speed {
                    positive("speed", c)?;
                }
            }
            KineticFamily::RelativisticPower { beta, gamma } => {
                if !(beta.is_finite() && *beta >= 1.0) {
                    return Err(invalid(format!("relativistic power needs beta >= 1, got {beta}")));
                }
                check_dim(dim, gamma.len())?;
                for &g in gamma {
                    positive("gamma", g)?;
                }
            }
        }
        Ok(Self { dim, family })
    }

    /// Standard Gaussian, `K = pᵀp/2`.
    pub fn gaussian(dim: usize) -> Self {
        Self {
            dim,
            family: KineticFamily::Gaussian {
                inverse_mass: SpdMatrix::identity(dim),
            },
        }
    }

    pub fn gaussian_with_inverse_mass(inverse_mass: SpdMatrix) -> Self {
        Self {
            dim: inverse_mass.dim(),
            family: KineticFamily::Gaussian { inverse_mass },
        }
    }

    pub fn laplace(dim: usize, scale: f64) -> Result<Self> {
        Self::new(dim, KineticFamily::Laplace { scale })
    }

    pub fn exponential_power(dim: usize, beta: f64) -> Result<Self> {
        Self::new(dim, KineticFamily::ExponentialPower { beta })
    }

    pub fn student_t(dim: usize, dof: f64) -> Result<Self> {
        Self::new(dim, KineticFamily::StudentT { dof })
    }

    pub fn relativistic(dim: usize, mass: f64, speed: f64) -> Result<Self> {
        Self::new(
            dim,
            KineticFamily::Relativistic {
                mass: vec![mass; dim],
                speed: vec![speed; dim],
            },
        )
    }

    pub fn relativistic_power(dim: usize, beta: f64, gamma: f64) -> Result<Self> {
        Self::new(
            dim,
            KineticFamily::RelativisticPower {
                beta,
                gamma: vec![gamma; dim],
            },
        )
    }

    pub fn family(&self) -> &KineticFamily {
        &self.family
    }

    /// Short label used in tables.
    pub fn name(&self) -> &'static str {
        match self.family {
            KineticFamily::Gaussian { .. } => "gaussian",
            KineticFamily::Laplace { .. } => "laplace",
            KineticFamily::ExponentialPower { .. } => "exponential_power",
            KineticFamily::StudentT { .. } => "student_t",
            KineticFamily::Relativistic { .. } => "relativistic",
            KineticFamily::RelativisticPower { .. } => "relativistic_power",
        }
    }

    /// `k_i(t)` for product-form families.
    fn coord_value(&self, i: usize, t: f64) -> f64 {
        match &self.family {
            KineticFamily::Gaussian { .. } => unreachable!("gaussian is handled as a quadratic form"),
            KineticFamily::Laplace { scale } => t.abs() / scale,
            KineticFamily::ExponentialPower { beta } => t.abs().powf(*beta) / beta,
            KineticFamily::StudentT { dof } => 0.5 * (dof + 1.0) * (t * t / dof).ln_1p(),
            KineticFamily::Relativistic { mass, speed } => {
                let mc = mass[i] * speed[i];
                mc * speed[i] * (1.0 + (t / mc) * (t / mc)).sqrt()
            }
            KineticFamily::RelativisticPower { beta, gamma } => {
                (1.0 + t * t / gamma[i]).powf(0.5 * beta) / beta
            }
        }
    }

    /// `k_i'(t)` for product-form families.
    fn coord_grad(&self, i: usize, t: f64) -> f64 {
        match &self.family {
            KineticFamily::Gaussian { .. } => unreachable!("gaussian is handled as a quadratic form"),
            KineticFamily::Laplace { scale } => sign(t) / scale,
            KineticFamily::ExponentialPower { beta } => sign(t) * t.abs().powf(beta - 1.0),
            KineticFamily::StudentT { dof } => (dof + 1.0) * t / (dof + t * t),
            KineticFamily::Relativistic { mass, speed } => {
                let mc = mass[i] * speed[i];
                t / (mass[i] * (1.0 + (t / mc) * (t / mc)).sqrt())
            }
            KineticFamily::RelativisticPower { beta, gamma } => {
                let g = gamma[i];
                (t / g) * (1.0 + t * t / g).powf(0.5 * beta - 1.0)
            }
        }
    }

    fn ars_scale(&self, i: usize) -> f64 {
        match &self.family {
            KineticFamily::Relativistic { mass, speed } => mass[i] * speed[i],
            KineticFamily::RelativisticPower { gamma, .. } => gamma[i].sqrt(),
            _ => 1.0,
        }
    }

    fn coord_params_equal(&self, i: usize, j: usize) -> bool {
        match &self.family {
            KineticFamily::Relativistic { mass, speed } => mass[i] == mass[j] && speed[i] == speed[j],
            KineticFamily::RelativisticPower { gamma, .. } => gamma[i] == gamma[j],
            _ => true,
        }
    }

    fn sample_by_ars(&self, rng: &mut dyn RngCore, out: &mut [f64]) -> Result<()> {
        // One envelope per run of identical coordinate parameters.
        let mut i = 0;
        while i < self.dim {
            let s = self.ars_scale(i);
            let idx = i;
            let mut env = ArsEnvelope::new(
                |t| -self.coord_value(idx, t),
                |t| -self.coord_grad(idx, t),
                (-s, s),
            )?;
            out[i] = env.draw(rng)?;
            i += 1;
            while i < self.dim && self.coord_params_equal(idx, i) {
                out[i] = env.draw(rng)?;
                i += 1;
            }
        }
        Ok(())
    }
}

impl KineticEnergy for Kinetic {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, p: &[f64]) -> f64 {
        match &self.family {
            KineticFamily::Gaussian { inverse_mass } => inverse_mass.half_quadratic(p),
            _ => p.iter().enumerate().map(|(i, &t)| self.coord_value(i, t)).sum(),
        }
    }

    fn gradient_into(&self, p: &[f64], out: &mut [f64]) {
        match &self.family {
            KineticFamily::Gaussian { inverse_mass } => inverse_mass.apply(p, out),
            _ => {
                for (i, (o, &t)) in out.iter_mut().zip(p).enumerate() {
                    *o = self.coord_grad(i, t);
                }
            }
        }
    }

    fn sample_into(&self, rng: &mut dyn RngCore, out: &mut [f64]) -> Result<()> {
        check_dim(self.dim, out.len())?;
        match &self.family {
            KineticFamily::Gaussian { inverse_mass } => {
                for o in out.iter_mut() {
                    *o = StandardNormal.sample(rng);
                }
                inverse_mass.whiten_inverse(out);
            }
            KineticFamily::Laplace { scale } => {
                for o in out.iter_mut() {
                    // Inverse CDF of |p|, then a fair sign.
                    let u: f64 = rng.random();
                    let mag = -scale * (-u).ln_1p();
                    *o = if rng.random::<bool>() { mag } else { -mag };
                }
            }
            KineticFamily::ExponentialPower { beta } => {
                let gamma = Gamma::new(1.0 / beta, 1.0).map_err(|e| invalid(e.to_string()))?;
                for o in out.iter_mut() {
                    let g: f64 = gamma.sample(rng);
                    let mag = (beta * g).powf(1.0 / beta);
                    *o = if rng.random::<bool>() { mag } else { -mag };
                }
            }
            KineticFamily::StudentT { dof } => {
                let t = StudentT::new(*dof).map_err(|e| invalid(e.to_string()))?;
                for o in out.iter_mut() {
                    *o = t.sample(rng);
                }
            }
            KineticFamily::Relativistic { .. } | KineticFamily::RelativisticPower { .. } => {
                self.sample_by_ars(rng, out)?;
            }
        }
        Ok(())
    }
}

/// `K(p)` with a dimension check.
pub fn kinetic_eval(kinetic: &Kinetic, p: &[f64]) -> Result<f64> {
    check_dim(kinetic.dim, p.len())?;
    Ok(kinetic.value(p))
}

/// `∇K(p)` with a dimension check.
pub fn kinetic_grad(kinetic: &Kinetic, p: &[f64]) -> Result<Vec<f64>> {
    check_dim(kinetic.dim, p.len())?;
    Ok(kinetic.gradient(p))
}

pub fn sample_momentum(kinetic: &dyn KineticEnergy, rng: &mut dyn RngCore) -> Result<Vec<f64>> {
    kinetic.sample(rng)
}

/// Draws of `∇K(p)` with `p` from the momentum distribution.
pub fn implicit_noise_samples(
    kinetic: &dyn KineticEnergy,
    n: usize,
    rng: &mut dyn RngCore,
) -> Result<Vec<Vec<f64>>> {
    if n == 0 {
        return Err(invalid("need at least one sample"));
    }
    let mut p = vec![0.0; kinetic.dim()];
    (0..n)
        .map(|_| {
            kinetic.sample_into(rng, &mut p)?;
            Ok(kinetic.gradient(&p))
        })
        .collect()
}
