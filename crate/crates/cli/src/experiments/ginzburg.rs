use anyhow::{bail, Result};
use kinetic_hmc::diagnostics::{effective_sample_size, iterations_to_region, step_size_esjd_tune, Norm};
use kinetic_hmc::targets::GinzburgLandauTarget;
use kinetic_hmc::{chain_rng, run_chain, ChainConfig, Potential, StepsDistribution};
use rand::Rng;
use rayon::prelude::*;

use super::derive_seed;
use crate::config::{GinzburgExperimentConfig, KineticSpec};
use crate::table::{Cell, Outputs, ResultTable};

#[derive(Debug, Clone, PartialEq)]
pub struct GinzburgRow {
    pub replicate: usize,
    pub kinetic: String,
    pub step_size: f64,
    pub acceptance_rate: f64,
    pub ess_min: f64,
    pub ess_mean: f64,
    pub ess_max: f64,
    pub far_acceptance: f64,
    pub far_divergences: usize,
    pub iterations_to_centre: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GinzburgSummary {
    pub kinetic: String,
    pub ess_min: f64,
    pub ess_mean: f64,
    pub ess_max: f64,
    /// Mean over replicates that reached the centre.
    pub iterations_to_centre: Option<f64>,
    pub n_reached: usize,
}

pub struct GinzburgRun {
    pub rows: Vec<GinzburgRow>,
    pub summary: Vec<GinzburgSummary>,
    pub outputs: Outputs,
}

fn run_one(
    cfg: &GinzburgExperimentConfig,
    target: &GinzburgLandauTarget,
    spec: &KineticSpec,
    replicate: usize,
    seed: u64,
) -> Result<GinzburgRow> {
    let d = target.dim();
    let kinetic = spec.build(d)?;
    let steps = StepsDistribution::Fixed(cfg.steps);
    let template = ChainConfig::new(1.0, steps, 1, derive_seed(seed, &[0]), vec![0.0; d]);
    let tuned = step_size_esjd_tune(target, &kinetic, &template, &cfg.step_grid, cfg.pilot_iterations)?;
    let eps = tuned.step_size;

    let eq_cfg = ChainConfig::new(eps, steps, cfg.burn_in + cfg.ess_iterations, derive_seed(seed, &[1]), vec![0.0; d]);
    let eq = run_chain(target, &kinetic, &eq_cfg)?;
    let kept = &eq.samples[cfg.burn_in + 1..];
    let ess = (0..d)
        .map(|i| effective_sample_size(&kept.iter().map(|s| s[i]).collect::<Vec<_>>()))
        .collect::<kinetic_hmc::Result<Vec<f64>>>()?;
    let acceptance_rate = eq.accepted[cfg.burn_in..].iter().filter(|&&a| a).count() as f64 / cfg.ess_iterations as f64;

    let mut rng = chain_rng(derive_seed(seed, &[2]), 0);
    let h = cfg.far_init_half_width;
    let init: Vec<f64> = (0..d).map(|_| rng.random_range(-h..=h)).collect();
    let far_cfg = ChainConfig::new(eps, steps, cfg.far_iterations, derive_seed(seed, &[3]), init);
    let far = run_chain(target, &kinetic, &far_cfg)?;

    Ok(GinzburgRow {
        replicate,
        kinetic: spec.label(),
        step_size: eps,
        acceptance_rate,
        ess_min: ess.iter().copied().fold(f64::INFINITY, f64::min),
        ess_mean: ess.iter().sum::<f64>() / d as f64,
        ess_max: ess.iter().copied().fold(0.0, f64::max),
        far_acceptance: far.acceptance_rate,
        far_divergences: far.n_divergences,
        iterations_to_centre: iterations_to_region(&far, Norm::Sup, cfg.centre_threshold)?,
    })
}

fn summarise(kinetic: &str, rows: &[GinzburgRow]) -> GinzburgSummary {
    let mine: Vec<&GinzburgRow> = rows.iter().filter(|r| r.kinetic == kinetic).collect();
    let n = mine.len() as f64;
    let reached: Vec<f64> = mine.iter().filter_map(|r| r.iterations_to_centre).map(|i| i as f64).collect();
    GinzburgSummary {
        kinetic: kinetic.to_string(),
        ess_min: mine.iter().map(|r| r.ess_min).sum::<f64>() / n,
        ess_mean: mine.iter().map(|r| r.ess_mean).sum::<f64>() / n,
        ess_max: mine.iter().map(|r| r.ess_max).sum::<f64>() / n,
        iterations_to_centre: (!reached.is_empty()).then(|| reached.iter().sum::<f64>() / reached.len() as f64),
        n_reached: reached.len(),
    }
}

pub fn run_ginzburg(cfg: &GinzburgExperimentConfig, seed: Option<u64>) -> Result<GinzburgRun> {
    if cfg.replicates == 0 || cfg.kinetics.is_empty() {
        bail!("need at least one replicate and one kinetic");
    }
    if cfg.ess_iterations < 100 {
        bail!("ess_iterations must be at least 100");
    }
    if !(cfg.far_init_half_width > 0.0) {
        bail!("far_init_half_width must be positive");
    }
    let seed = seed.unwrap_or(cfg.seed);
    let target = GinzburgLandauTarget::new(cfg.side, cfg.tau, cfg.alpha, cfg.lambda)?;
    let jobs: Vec<(usize, usize)> =
        (0..cfg.replicates).flat_map(|r| (0..cfg.kinetics.len()).map(move |k| (r, k))).collect();
    let rows = jobs
        .par_iter()
        .map(|&(r, k)| run_one(cfg, &target, &cfg.kinetics[k], r, derive_seed(seed, &[r as u64, k as u64])))
        .collect::<Result<Vec<_>>>()?;
    let summary: Vec<GinzburgSummary> = cfg.kinetics.iter().map(|k| summarise(&k.label(), &rows)).collect();

    let mut per_rep = ResultTable::new([
        "replicate",
        "kinetic",
        "step_size",
        "acceptance_rate",
        "ess_min",
        "ess_mean",
        "ess_max",
        "far_acceptance",
        "far_divergences",
        "iterations_to_centre",
    ]);
    for r in &rows {
        per_rep.push(vec![
            Cell::from(r.replicate),
            r.kinetic.as_str().into(),
            Cell::Real(r.step_size),
            Cell::Real(r.acceptance_rate),
            Cell::Real(r.ess_min),
            Cell::Real(r.ess_mean),
            Cell::Real(r.ess_max),
            Cell::Real(r.far_acceptance),
            Cell::from(r.far_divergences),
            r.iterations_to_centre.into(),
        ])?;
    }
    let mut table = ResultTable::new(["kinetic", "ess_min", "ess_mean", "ess_max", "iterations_to_centre", "n_reached"]);
    for s in &summary {
        table.push(vec![
            s.kinetic.as_str().into(),
            Cell::Real(s.ess_min),
            Cell::Real(s.ess_mean),
            Cell::Real(s.ess_max),
            s.iterations_to_centre.into(),
            Cell::from(s.n_reached),
        ])?;
    }
    Ok(GinzburgRun {
        rows,
        summary,
        outputs: vec![("ginzburg_table.csv".into(), table), ("ginzburg_replicates.csv".into(), per_rep)],
    })
}
