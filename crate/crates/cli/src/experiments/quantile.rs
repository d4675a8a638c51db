use anyhow::{bail, Result};
use kinetic_hmc::diagnostics::{coordinate_ess, iterations_to_region, step_size_grid_tune, Norm, TuneSettings};
use kinetic_hmc::{run_chain, ChainConfig, ChainOutput, Potential, StepsDistribution};
use rayon::prelude::*;

use super::derive_seed;
use crate::config::{KineticSpec, QuantileExperimentConfig, QuantileSpec};
use crate::table::{Cell, Outputs, ResultTable};

#[derive(Debug, Clone, PartialEq)]
pub struct QuantileRow {
    pub q: f64,
    pub replicate: usize,
    pub kinetic: String,
    pub step_size: f64,
    pub window_hit: bool,
    pub far_acceptance: f64,
    pub iterations_to_region: Option<usize>,
    pub mixing_acceptance: f64,
    pub mixing_ess_min: Option<f64>,
}

pub struct QuantileRun {
    pub rows: Vec<QuantileRow>,
    pub outputs: Outputs,
}

impl QuantileRun {
    pub fn row(&self, q: f64, replicate: usize, kinetic: &str) -> Option<&QuantileRow> {
        self.rows.iter().find(|r| r.q == q && r.replicate == replicate && r.kinetic == kinetic)
    }
}

fn trace_table(chain: &ChainOutput) -> Result<ResultTable> {
    let d = chain.samples[0].len();
    let mut t = ResultTable::new(std::iter::once("iter".to_string()).chain((1..=d).map(|j| format!("beta{j}"))));
    for (i, s) in chain.samples.iter().enumerate() {
        let mut row = vec![Cell::from(i * chain.record_every)];
        row.extend(s.iter().map(|&v| Cell::Real(v)));
        t.push(row)?;
    }
    Ok(t)
}

fn file_label(q: f64, kinetic: &str) -> String {
    let k: String = kinetic.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
    format!("q{q}_{}", k.trim_matches('_'))
}

struct Replicate {
    row: QuantileRow,
    far: ChainOutput,
    mixing: ChainOutput,
}

fn run_one(
    cfg: &QuantileExperimentConfig,
    target: &dyn Potential,
    spec: &KineticSpec,
    q: f64,
    replicate: usize,
    seed: u64,
) -> Result<Replicate> {
    let d = target.dim();
    let kinetic = spec.build(d)?;
    let jitter = if matches!(spec, KineticSpec::Laplace { .. }) { cfg.laplace_jitter } else { 0.0 };
    let equilibrium = cfg.model.true_beta.clone();
    let template = ChainConfig {
        step_jitter: jitter,
        ..ChainConfig::new(1.0, StepsDistribution::Fixed(1), 1, derive_seed(seed, &[0]), equilibrium.clone())
    };
    let tuned = step_size_grid_tune(
        target,
        &kinetic,
        &template,
        &cfg.step_grid,
        &TuneSettings { window: cfg.accept_window, pilot_iterations: cfg.pilot_iterations },
    )?;
    let far_init: Vec<f64> = vec![cfg.far_init_norm / (d as f64).sqrt(); d];
    let far_cfg = ChainConfig {
        step_jitter: jitter,
        ..ChainConfig::new(tuned.step_size, StepsDistribution::Fixed(1), cfg.far_iterations, derive_seed(seed, &[1]), far_init)
    };
    let far = run_chain(target, &kinetic, &far_cfg)?;
    let mix_cfg = ChainConfig {
        step_jitter: jitter,
        ..ChainConfig::new(tuned.step_size, StepsDistribution::Fixed(1), cfg.mixing_iterations, derive_seed(seed, &[2]), equilibrium)
    };
    let mixing = run_chain(target, &kinetic, &mix_cfg)?;
    let ess_min = coordinate_ess(&mixing).ok().map(|e| e.into_iter().fold(f64::INFINITY, f64::min));
    Ok(Replicate {
        row: QuantileRow {
            q,
            replicate,
            kinetic: spec.label(),
            step_size: tuned.step_size,
            window_hit: tuned.window_hit,
            far_acceptance: far.acceptance_rate,
            iterations_to_region: iterations_to_region(&far, Norm::Euclidean, cfg.region_threshold)?,
            mixing_acceptance: mixing.acceptance_rate,
            mixing_ess_min: ess_min,
        },
        far,
        mixing,
    })
}

pub fn run_quantile(cfg: &QuantileExperimentConfig, seed: Option<u64>) -> Result<QuantileRun> {
    if cfg.replicates == 0 {
        bail!("replicates must be at least 1");
    }
    if cfg.model.true_beta.len() != cfg.model.data()?.n_covariates() {
        bail!("true_beta length must match the number of covariates");
    }
    let seed = seed.unwrap_or(cfg.seed);
    let data = cfg.model.data()?;
    let mut rows = Vec::new();
    let mut outputs = Vec::new();
    for (qi, &q) in cfg.q_values.iter().enumerate() {
        let target = QuantileSpec { q, ..cfg.model.clone() }.build(data.clone())?;
        let jobs: Vec<(usize, usize)> =
            (0..cfg.replicates).flat_map(|r| (0..cfg.kinetics.len()).map(move |k| (r, k))).collect();
        let results = jobs
            .par_iter()
            .map(|&(r, k)| {
                let s = derive_seed(seed, &[qi as u64, r as u64, k as u64]);
                run_one(cfg, &target, &cfg.kinetics[k], q, r, s)
            })
            .collect::<Result<Vec<_>>>()?;
        for rep in &results {
            if rep.row.replicate == 0 {
                let label = file_label(q, &rep.row.kinetic);
                outputs.push((format!("quantile_trace_{label}.csv"), trace_table(&rep.far)?));
                outputs.push((format!("quantile_mixing_{label}.csv"), trace_table(&rep.mixing)?));
            }
        }
        rows.extend(results.into_iter().map(|r| r.row));
    }
    let mut table = ResultTable::new([
        "q",
        "replicate",
        "kinetic",
        "step_size",
        "window_hit",
        "far_acceptance",
        "iterations_to_region",
        "mixing_acceptance",
        "mixing_ess_min",
    ]);
    for r in &rows {
        table.push(vec![
            Cell::Real(r.q),
            Cell::from(r.replicate),
            r.kinetic.as_str().into(),
            Cell::Real(r.step_size),
            r.window_hit.into(),
            Cell::Real(r.far_acceptance),
            r.iterations_to_region.into(),
            Cell::Real(r.mixing_acceptance),
            r.mixing_ess_min.into(),
        ])?;
    }
    outputs.insert(0, ("quantile_convergence.csv".into(), table));
    Ok(QuantileRun { rows, outputs })
}
