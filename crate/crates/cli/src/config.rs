//! JSON configuration. Every struct rejects unknown keys; experiment
//! configs default every field so `{}` runs the desk-scale setup.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use kinetic_hmc::targets::{
    DoubleWellTarget, ExpPowerTarget, FunnelTarget, GaussianTarget, GinzburgLandauTarget, QuantileData,
    QuantileRegressionTarget,
};
use kinetic_hmc::{Kinetic, Potential, SpdMatrix, StepsDistribution};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

/// Parses `text` as JSON, reporting the line and column of the first error.
pub fn parse_config<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| anyhow::anyhow!("{origin}:{}:{}: {e}", e.line(), e.column()))
}

pub fn load_config<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_config(&text, &path.display().to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum TargetSpec {
    Gaussian {
        dim: usize,
        /// Diagonal of the precision matrix; identity when absent.
        #[serde(default)]
        precision: Option<Vec<f64>>,
    },
    ExpPower {
        dim: usize,
        alpha: f64,
    },
    DoubleWell {
        c: f64,
        a: f64,
        b: f64,
    },
    Funnel,
    Ginzburg {
        side: usize,
        tau: f64,
        alpha: f64,
        lambda: f64,
    },
    Quantile(QuantileSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuantileSpec {
    /// CSV with header `y,x1,...,xm`; simulated data when absent.
    pub data_csv: Option<PathBuf>,
    pub n_data: usize,
    pub true_beta: Vec<f64>,
    pub data_seed: u64,
    pub tau: f64,
    pub sigma: f64,
    pub xi: f64,
    pub lambda: f64,
    pub q: f64,
}

impl Default for QuantileSpec {
    fn default() -> Self {
        Self {
            data_csv: None,
            n_data: 20,
            true_beta: vec![1.0, -1.0],
            data_seed: 2017,
            tau: 0.5,
            sigma: 1.0,
            xi: 0.01,
            lambda: 1.0,
            q: 2.0,
        }
    }
}

impl QuantileSpec {
    pub fn data(&self) -> Result<QuantileData> {
        Ok(match &self.data_csv {
            Some(path) => QuantileData::from_csv(path)?,
            None => QuantileData::simulate(self.n_data, &self.true_beta, self.data_seed),
        })
    }

    pub fn build(&self, data: QuantileData) -> Result<QuantileRegressionTarget> {
        Ok(QuantileRegressionTarget::new(data, self.tau, self.sigma, self.xi, self.lambda, self.q)?)
    }
}

impl TargetSpec {
    pub fn build(&self) -> Result<Box<dyn Potential>> {
        Ok(match self {
            Self::Gaussian { dim, precision } => {
                let p = match precision {
                    Some(diag) => {
                        if diag.len() != *dim {
                            bail!("precision has {} entries for dimension {dim}", diag.len());
                        }
                        SpdMatrix::diagonal(diag.clone())?
                    }
                    None => SpdMatrix::identity(*dim),
                };
                Box::new(GaussianTarget::new(p))
            }
            Self::ExpPower { dim, alpha } => Box::new(ExpPowerTarget::new(*dim, *alpha)?),
            Self::DoubleWell { c, a, b } => Box::new(DoubleWellTarget::new(*c, *a, *b)?),
            Self::Funnel => Box::new(FunnelTarget),
            Self::Ginzburg { side, tau, alpha, lambda } => {
                Box::new(GinzburgLandauTarget::new(*side, *tau, *alpha, *lambda)?)
            }
            Self::Quantile(spec) => Box::new(spec.build(spec.data()?)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum KineticSpec {
    Gaussian {
        /// Diagonal of the inverse mass matrix; identity when absent.
        #[serde(default)]
        inverse_mass: Option<Vec<f64>>,
    },
    Laplace {
        #[serde(default = "one")]
        scale: f64,
    },
    ExponentialPower {
        beta: f64,
    },
    StudentT {
        dof: f64,
    },
    Relativistic {
        #[serde(default = "one")]
        mass: f64,
        #[serde(default = "one")]
        speed: f64,
    },
    RelativisticPower {
        beta: f64,
        #[serde(default = "one")]
        gamma: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl KineticSpec {
    pub fn gaussian() -> Self {
        Self::Gaussian { inverse_mass: None }
    }

    pub fn build(&self, dim: usize) -> Result<Kinetic> {
        Ok(match self {
            Self::Gaussian { inverse_mass: None } => Kinetic::gaussian(dim),
            Self::Gaussian { inverse_mass: Some(diag) } => {
                if diag.len() != dim {
                    bail!("inverse_mass has {} entries for dimension {dim}", diag.len());
                }
                Kinetic::gaussian_with_inverse_mass(SpdMatrix::diagonal(diag.clone())?)
            }
            Self::Laplace { scale } => Kinetic::laplace(dim, *scale)?,
            Self::ExponentialPower { beta } => Kinetic::exponential_power(dim, *beta)?,
            Self::StudentT { dof } => Kinetic::student_t(dim, *dof)?,
            Self::Relativistic { mass, speed } => Kinetic::relativistic(dim, *mass, *speed)?,
            Self::RelativisticPower { beta, gamma } => Kinetic::relativistic_power(dim, *beta, *gamma)?,
        })
    }

    /// Short label used in output tables.
    pub fn label(&self) -> String {
        match self {
            Self::Gaussian { .. } => "gaussian".into(),
            Self::Laplace { .. } => "laplace".into(),
            Self::ExponentialPower { beta } => format!("exponential_power({})", fmt_param(*beta)),
            Self::StudentT { dof } => format!("student_t({})", fmt_param(*dof)),
            Self::Relativistic { .. } => "relativistic".into(),
            Self::RelativisticPower { beta, .. } => format!("relativistic_power({})", fmt_param(*beta)),
        }
    }
}

fn fmt_param(v: f64) -> String {
    if (v * 3.0).fract().abs() < 1e-12 && v.fract().abs() > 1e-12 {
        format!("{}/3", (v * 3.0).round())
    } else {
        format!("{v}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum StepsSpec {
    Fixed(usize),
    /// Inclusive `[lo, hi]`.
    Uniform([usize; 2]),
}

impl StepsSpec {
    pub fn to_distribution(self) -> StepsDistribution {
        match self {
            Self::Fixed(l) => StepsDistribution::Fixed(l),
            Self::Uniform([lo, hi]) => StepsDistribution::UniformInt { lo, hi },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleConfig {
    pub target: TargetSpec,
    pub kinetic: KineticSpec,
    pub step_size: f64,
    pub steps: StepsSpec,
    pub n_iterations: usize,
    #[serde(default)]
    pub seed: u64,
    pub init: Vec<f64>,
    #[serde(default = "one_usize")]
    pub record_every: usize,
    #[serde(default)]
    pub step_jitter: f64,
}

fn one_usize() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuantileExperimentConfig {
    pub model: QuantileSpec,
    pub q_values: Vec<f64>,
    pub kinetics: Vec<KineticSpec>,
    pub seed: u64,
    pub replicates: usize,
    pub far_init_norm: f64,
    pub region_threshold: f64,
    pub far_iterations: usize,
    pub mixing_iterations: usize,
    pub step_grid: Vec<f64>,
    pub pilot_iterations: usize,
    pub accept_window: (f64, f64),
    /// Jitter applied to Laplace chains only.
    pub laplace_jitter: f64,
}

impl Default for QuantileExperimentConfig {
    fn default() -> Self {
        Self {
            model: QuantileSpec::default(),
            q_values: vec![2.0, 1.5],
            kinetics: vec![
                KineticSpec::ExponentialPower { beta: 3.0 },
                KineticSpec::gaussian(),
                KineticSpec::Laplace { scale: 1.0 },
                KineticSpec::StudentT { dof: 4.0 },
            ],
            seed: 2017,
            replicates: 5,
            far_init_norm: 200.0,
            region_threshold: 5.0,
            far_iterations: 5000,
            mixing_iterations: 5000,
            step_grid: geometric_grid(0.005, 2.0, 40),
            pilot_iterations: 2000,
            accept_window: (0.65, 0.75),
            laplace_jitter: 0.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GinzburgExperimentConfig {
    pub side: usize,
    pub tau: f64,
    pub alpha: f64,
    pub lambda: f64,
    pub kinetics: Vec<KineticSpec>,
    pub steps: usize,
    pub seed: u64,
    pub replicates: usize,
    pub ess_iterations: usize,
    pub burn_in: usize,
    pub far_iterations: usize,
    pub far_init_half_width: f64,
    pub centre_threshold: f64,
    pub step_grid: Vec<f64>,
    pub pilot_iterations: usize,
}

impl Default for GinzburgExperimentConfig {
    fn default() -> Self {
        Self {
            side: 5,
            tau: 2.0,
            alpha: 0.1,
            lambda: 0.5,
            kinetics: vec![
                KineticSpec::gaussian(),
                KineticSpec::RelativisticPower { beta: 4.0 / 3.0, gamma: 1.0 },
                KineticSpec::Relativistic { mass: 1.0, speed: 1.0 },
                KineticSpec::ExponentialPower { beta: 4.0 / 3.0 },
            ],
            steps: 10,
            seed: 2017,
            replicates: 3,
            ess_iterations: 10_000,
            burn_in: 1000,
            far_iterations: 1000,
            far_init_half_width: 10.0,
            centre_threshold: 2.0,
            step_grid: geometric_grid(0.02, 1.0, 20),
            pilot_iterations: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TradeoffExperimentConfig {
    pub alpha: f64,
    pub kinetics: Vec<KineticSpec>,
    pub seed: u64,
    pub grid_points: usize,
    pub eps_min: f64,
    pub eps_max: f64,
    pub n_iterations: usize,
    pub steps: StepsSpec,
    pub burn_in: usize,
    pub burn_in_step_size: f64,
}

impl Default for TradeoffExperimentConfig {
    fn default() -> Self {
        Self {
            alpha: 1.5,
            kinetics: vec![KineticSpec::gaussian(), KineticSpec::Relativistic { mass: 1.0, speed: 1.0 }],
            seed: 2017,
            grid_points: 20,
            eps_min: 0.1,
            eps_max: 5.0,
            n_iterations: 20_000,
            steps: StepsSpec::Uniform([1, 5]),
            burn_in: 1000,
            burn_in_step_size: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PeriodProbeConfig {
    pub alpha: f64,
    pub beta: f64,
    pub energies: Vec<f64>,
}

impl Default for PeriodProbeConfig {
    fn default() -> Self {
        Self { alpha: 2.0, beta: 2.0, energies: vec![0.1, 1.0, 10.0, 100.0, 1000.0] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GrowthProbeConfig {
    pub target: TargetSpec,
    pub kinetic: KineticSpec,
    /// Normalised before use; `e_1` when absent.
    pub direction: Option<Vec<f64>>,
    pub radii: Vec<f64>,
}

impl Default for GrowthProbeConfig {
    fn default() -> Self {
        Self {
            target: TargetSpec::ExpPower { dim: 1, alpha: 4.0 },
            kinetic: KineticSpec::gaussian(),
            direction: None,
            radii: vec![1.0, 10.0, 100.0, 1000.0, 1e4],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NegligibleProbeConfig {
    pub target: TargetSpec,
    pub kinetic: KineticSpec,
    pub radii: Vec<f64>,
    pub delta: f64,
    pub step_size: f64,
    pub steps: StepsSpec,
    pub n_trials: usize,
    pub seed: u64,
}

impl Default for NegligibleProbeConfig {
    fn default() -> Self {
        Self {
            target: TargetSpec::ExpPower { dim: 1, alpha: 4.0 },
            kinetic: KineticSpec::StudentT { dof: 4.0 },
            radii: vec![10.0, 100.0, 1000.0],
            delta: 0.1,
            step_size: 0.1,
            steps: StepsSpec::Fixed(1),
            n_trials: 1000,
            seed: 2017,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ImplicitNoiseProbeConfig {
    pub kinetic: KineticSpec,
    pub dim: usize,
    pub n_samples: usize,
    pub seed: u64,
}

impl Default for ImplicitNoiseProbeConfig {
    fn default() -> Self {
        Self { kinetic: KineticSpec::Laplace { scale: 1.0 }, dim: 1, n_samples: 10_000, seed: 2017 }
    }
}

/// `n` points from `lo` to `hi`, evenly spaced on a log scale.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let r = (hi / lo).ln() / (n - 1) as f64;
    (0..n).map(|i| lo * (r * i as f64).exp()).collect()
}

/// `n` evenly spaced points from `lo` to `hi`.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}
