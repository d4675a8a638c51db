use anyhow::{bail, Result};
use kinetic_hmc::diagnostics::{growth_probe, negligible_move_probability, period_exponent_fit, GrowthProbeResult, PeriodResult};
use kinetic_hmc::kinetics::implicit_noise_samples;
use kinetic_hmc::stats::norm;
use kinetic_hmc::{chain_rng, ChainConfig};

use super::derive_seed;
use crate::config::{GrowthProbeConfig, ImplicitNoiseProbeConfig, NegligibleProbeConfig, PeriodProbeConfig};
use crate::table::{Cell, Outputs, ResultTable};

pub fn probe_period(cfg: &PeriodProbeConfig) -> Result<(PeriodResult, Outputs)> {
    let res = period_exponent_fit(cfg.alpha, cfg.beta, &cfg.energies)?;
    let mut t = ResultTable::new(["alpha", "beta", "energy", "period", "fitted_exponent", "analytic_exponent"]);
    for (&e, &p) in res.energies.iter().zip(&res.periods) {
        t.push(vec![
            Cell::Real(res.alpha),
            Cell::Real(res.beta),
            Cell::Real(e),
            Cell::Real(p),
            Cell::Real(res.fitted_exponent),
            Cell::Real(res.analytic_exponent),
        ])?;
    }
    Ok((res, vec![("period.csv".into(), t)]))
}

pub fn probe_growth(cfg: &GrowthProbeConfig) -> Result<(GrowthProbeResult, Outputs)> {
    let target = cfg.target.build()?;
    let d = target.dim();
    let kinetic = cfg.kinetic.build(d)?;
    let direction = match &cfg.direction {
        Some(u) => {
            let n = norm(u);
            if u.len() != d || !(n > 0.0) {
                bail!("direction must be a nonzero vector of length {d}");
            }
            u.iter().map(|v| v / n).collect()
        }
        None => {
            let mut e = vec![0.0; d];
            e[0] = 1.0;
            e
        }
    };
    let res = growth_probe(&target, &kinetic, &direction, &cfg.radii)?;
    let mut t = ResultTable::new(["radius", "ratio", "slope", "classification"]);
    for (&r, &q) in res.radii.iter().zip(&res.ratios) {
        t.push(vec![Cell::Real(r), Cell::Real(q), Cell::Real(res.slope), res.classification.as_str().into()])?;
    }
    Ok((res, vec![("growth.csv".into(), t)]))
}

#[derive(Debug, Clone, PartialEq)]
pub struct NegligibleRow {
    pub radius: f64,
    pub proposal: f64,
    pub proposal_std_error: f64,
    pub kernel: f64,
    pub kernel_std_error: f64,
}

/// Probes along `e_1`.
pub fn probe_negligible(cfg: &NegligibleProbeConfig, seed: Option<u64>) -> Result<(Vec<NegligibleRow>, Outputs)> {
    let target = cfg.target.build()?;
    let d = target.dim();
    let kinetic = cfg.kinetic.build(d)?;
    let seed = seed.unwrap_or(cfg.seed);
    let mut rows = Vec::new();
    for (i, &r) in cfg.radii.iter().enumerate() {
        let mut x = vec![0.0; d];
        x[0] = r;
        let chain_cfg = ChainConfig::new(cfg.step_size, cfg.steps.to_distribution(), 1, seed, x.clone());
        let mut rng = chain_rng(derive_seed(seed, &[i as u64]), 0);
        let est = negligible_move_probability(&target, &kinetic, &x, cfg.delta, &chain_cfg, cfg.n_trials, &mut rng)?;
        rows.push(NegligibleRow {
            radius: r,
            proposal: est.proposal,
            proposal_std_error: est.proposal_std_error,
            kernel: est.kernel,
            kernel_std_error: est.kernel_std_error,
        });
    }
    let mut t = ResultTable::new(["radius", "estimate", "std_error", "kernel_estimate", "kernel_std_error"]);
    for r in &rows {
        t.push(vec![
            Cell::Real(r.radius),
            Cell::Real(r.proposal),
            Cell::Real(r.proposal_std_error),
            Cell::Real(r.kernel),
            Cell::Real(r.kernel_std_error),
        ])?;
    }
    Ok((rows, vec![("negligible.csv".into(), t)]))
}

pub fn probe_implicit_noise(cfg: &ImplicitNoiseProbeConfig, seed: Option<u64>) -> Result<(Vec<Vec<f64>>, Outputs)> {
    let kinetic = cfg.kinetic.build(cfg.dim)?;
    let mut rng = chain_rng(seed.unwrap_or(cfg.seed), 0);
    let draws = implicit_noise_samples(&kinetic, cfg.n_samples, &mut rng)?;
    let mut t = ResultTable::new((1..=cfg.dim).map(|i| format!("grad_k{i}")));
    for g in &draws {
        t.push(g.iter().map(|&v| Cell::Real(v)).collect())?;
    }
    Ok((draws, vec![("implicit_noise.csv".into(), t)]))
}
