//! Metropolis-adjusted HMC: fresh momentum every iteration, a leapfrog
//! trajectory of random length, accept with probability `1 ∧ e^{−ΔH}`.

use rand::{Rng, RngCore};
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::integrator::{trajectory_with, Leapfrog};
use crate::model::{chain_rng, check_dim, KineticEnergy, PhasePoint, Potential};

/// Distribution of the number of leapfrog steps per iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepsDistribution {
    Fixed(usize),
    /// Uniform on `lo..=hi`.
    UniformInt { lo: usize, hi: usize },
}

impl StepsDistribution {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Fixed(l) if l >= 1 => Ok(()),
            Self::UniformInt { lo, hi } if 1 <= lo && lo <= hi => Ok(()),
            other => Err(invalid(format!("invalid steps distribution {other:?}"))),
        }
    }

    pub fn draw(&self, rng: &mut dyn RngCore) -> usize {
        match *self {
            Self::Fixed(l) => l,
            Self::UniformInt { lo, hi } => rng.random_range(lo..=hi),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainConfig {
    pub step_size: f64,
    pub steps: StepsDistribution,
    pub n_iterations: usize,
    pub seed: u64,
    pub init: Vec<f64>,
    /// Store every `record_every`-th position.
    pub record_every: usize,
    /// Each iteration uses `step_size · U(1 − j, 1 + j)` for `j` in `[0, 1)`.
    /// Needed for kinetics whose moves live on a lattice, such as Laplace.
    pub step_jitter: f64,
}

impl ChainConfig {
    pub fn new(step_size: f64, steps: StepsDistribution, n_iterations: usize, seed: u64, init: Vec<f64>) -> Self {
        Self { step_size, steps, n_iterations, seed, init, record_every: 1, step_jitter: 0.0 }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        if !(self.step_size.is_finite() && self.step_size > 0.0) {
            return Err(invalid(format!("step size must be positive, got {}", self.step_size)));
        }
        self.steps.validate()?;
        if self.n_iterations == 0 {
            return Err(invalid("n_iterations must be at least 1"));
        }
        if !(0.0..1.0).contains(&self.step_jitter) {
            return Err(invalid(format!("step jitter must lie in [0, 1), got {}", self.step_jitter)));
        }
        if self.record_every == 0 {
            return Err(invalid("record_every must be at least 1"));
        }
        check_dim(dim, self.init.len())?;
        if self.init.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("initial position"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainOutput {
    /// Stored positions, starting with the initial one.
    pub samples: Vec<Vec<f64>>,
    pub accepted: Vec<bool>,
    pub delta_h: Vec<f64>,
    pub acceptance_rate: f64,
    pub n_divergences: usize,
    pub record_every: usize,
}

impl ChainOutput {
    pub fn is_thinned(&self) -> bool {
        self.record_every > 1
    }

    /// Values of coordinate `i` across the stored samples.
    pub fn coordinate(&self, i: usize) -> Vec<f64> {
        self.samples.iter().map(|s| s[i]).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationOutcome {
    pub position: Vec<f64>,
    pub accepted: bool,
    pub delta_h: f64,
    pub diverged: bool,
}

/// Metropolis acceptance test for energy error `delta_h`.
fn accept(delta_h: f64, rng: &mut dyn RngCore) -> bool {
    if delta_h <= 0.0 {
        return true;
    }
    if !delta_h.is_finite() {
        return false;
    }
    let u: f64 = rng.random();
    u.ln() < -delta_h
}

struct Kernel<'a> {
    target: &'a dyn Potential,
    kinetic: &'a dyn KineticEnergy,
    step_size: f64,
    jitter: f64,
    steps: StepsDistribution,
    lf: Leapfrog,
    momentum: Vec<f64>,
}

impl<'a> Kernel<'a> {
    fn new(target: &'a dyn Potential, kinetic: &'a dyn KineticEnergy, cfg: &ChainConfig) -> Self {
        let d = target.dim();
        Self {
            target,
            kinetic,
            step_size: cfg.step_size,
            jitter: cfg.step_jitter,
            steps: cfg.steps,
            lf: Leapfrog::new(d),
            momentum: vec![0.0; d],
        }
    }

    fn step(&mut self, x: &[f64], rng: &mut dyn RngCore) -> Result<IterationOutcome> {
        self.kinetic.sample_into(rng, &mut self.momentum)?;
        let steps = self.steps.draw(rng);
        let eps = if self.jitter > 0.0 {
            self.step_size * (1.0 + self.jitter * (2.0 * rng.random::<f64>() - 1.0))
        } else {
            self.step_size
        };
        let s = PhasePoint::new(x.to_vec(), self.momentum.clone())?;
        let t = trajectory_with(&mut self.lf, self.target, self.kinetic, &s, eps, steps)?;
        let accepted = !t.diverged() && accept(t.delta_h, rng);
        let position = if accepted { t.end.into_parts().0 } else { x.to_vec() };
        Ok(IterationOutcome { position, accepted, delta_h: t.delta_h, diverged: t.diverged_at.is_some() })
    }
}

/// One HMC transition from `x`.
pub fn hmc_iteration(
    target: &dyn Potential,
    kinetic: &dyn KineticEnergy,
    x: &[f64],
    cfg: &ChainConfig,
    rng: &mut dyn RngCore,
) -> Result<IterationOutcome> {
    cfg.steps.validate()?;
    if !(0.0..1.0).contains(&cfg.step_jitter) {
        return Err(invalid("step jitter must lie in [0, 1)"));
    }
    check_dim(target.dim(), x.len())?;
    check_dim(kinetic.dim(), x.len())?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("position"));
    }
    Kernel::new(target, kinetic, cfg).step(x, rng)
}

fn run_stream(
    target: &dyn Potential,
    kinetic: &dyn KineticEnergy,
    cfg: &ChainConfig,
    stream: u64,
) -> Result<ChainOutput> {
    cfg.validate(target.dim())?;
    check_dim(target.dim(), kinetic.dim())?;
    let mut rng = chain_rng(cfg.seed, stream);
    let mut kernel = Kernel::new(target, kinetic, cfg);
    let n = cfg.n_iterations;
    let mut samples = Vec::with_capacity(n / cfg.record_every + 1);
    let mut accepted = Vec::with_capacity(n);
    let mut delta_h = Vec::with_capacity(n);
    let mut n_divergences = 0;
    let mut x = cfg.init.clone();
    samples.push(x.clone());
    for i in 1..=n {
        let out = kernel.step(&x, &mut rng)?;
        accepted.push(out.accepted);
        delta_h.push(out.delta_h);
        n_divergences += usize::from(out.diverged);
        x = out.position;
        if i % cfg.record_every == 0 {
            samples.push(x.clone());
        }
    }
    let acceptance_rate = accepted.iter().filter(|&&a| a).count() as f64 / n as f64;
    Ok(ChainOutput { samples, accepted, delta_h, acceptance_rate, n_divergences, record_every: cfg.record_every })
}

/// Runs one chain on stream 0 of `cfg.seed`.
pub fn run_chain(target: &dyn Potential, kinetic: &dyn KineticEnergy, cfg: &ChainConfig) -> Result<ChainOutput> {
    run_stream(target, kinetic, cfg, 0)
}

/// Runs `n_chains` chains in parallel; chain `i` uses stream `i` of
/// `cfg.seed`, so results do not depend on scheduling.
pub fn run_replicates(
    target: &dyn Potential,
    kinetic: &dyn KineticEnergy,
    cfg: &ChainConfig,
    n_chains: usize,
) -> Result<Vec<ChainOutput>> {
    if n_chains == 0 {
        return Err(invalid("n_chains must be at least 1"));
    }
    (0..n_chains as u64)
        .into_par_iter()
        .map(|i| run_stream(target, kinetic, cfg, i))
        .collect()
}
