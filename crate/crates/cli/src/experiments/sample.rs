use std::time::Instant;

use anyhow::Result;
use kinetic_hmc::diagnostics::{coordinate_ess, expected_squared_jump_distance};
use kinetic_hmc::stats::{mean, variance};
use kinetic_hmc::{run_chain, ChainConfig, ChainOutput};

use crate::config::SampleConfig;
use crate::table::{Cell, Outputs, ResultTable};

pub struct SampleRun {
    pub chain: ChainOutput,
    pub outputs: Outputs,
    pub seconds: f64,
}

pub fn run_sample(cfg: &SampleConfig, seed: Option<u64>) -> Result<SampleRun> {
    let target = cfg.target.build()?;
    let kinetic = cfg.kinetic.build(target.dim())?;
    let seed = seed.unwrap_or(cfg.seed);
    let chain_cfg = ChainConfig {
        record_every: cfg.record_every,
        step_jitter: cfg.step_jitter,
        ..ChainConfig::new(cfg.step_size, cfg.steps.to_distribution(), cfg.n_iterations, seed, cfg.init.clone())
    };
    chain_cfg.validate(target.dim())?;
    let start = Instant::now();
    let chain = run_chain(&target, &kinetic, &chain_cfg)?;
    let seconds = start.elapsed().as_secs_f64();
    let d = target.dim();

    let mut samples = ResultTable::new(
        std::iter::once("iter".to_string()).chain((1..=d).map(|i| format!("x{i}"))),
    );
    for (i, s) in chain.samples.iter().enumerate() {
        let mut row = vec![Cell::from(i * chain.record_every)];
        row.extend(s.iter().map(|&v| Cell::Real(v)));
        samples.push(row)?;
    }

    let mut columns: Vec<String> = [
        "seed",
        "n_iterations",
        "acceptance_rate",
        "n_divergences",
        "ess_min",
        "ess_mean",
        "ess_max",
        "esjd",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    columns.extend((1..=d).map(|i| format!("mean_x{i}")));
    columns.extend((1..=d).map(|i| format!("variance_x{i}")));
    let mut summary = ResultTable::new(columns);
    let (ess_min, ess_mean, ess_max) = match coordinate_ess(&chain) {
        Ok(ess) => (
            Cell::Real(ess.iter().copied().fold(f64::INFINITY, f64::min)),
            Cell::Real(mean(&ess)),
            Cell::Real(ess.iter().copied().fold(0.0, f64::max)),
        ),
        Err(_) => (Cell::Missing, Cell::Missing, Cell::Missing),
    };
    let mut row = vec![
        Cell::from(seed),
        Cell::from(cfg.n_iterations),
        Cell::Real(chain.acceptance_rate),
        Cell::from(chain.n_divergences),
        ess_min,
        ess_mean,
        ess_max,
        expected_squared_jump_distance(&chain).ok().into(),
    ];
    let coords: Vec<Vec<f64>> = (0..d).map(|i| chain.coordinate(i)).collect();
    row.extend(coords.iter().map(|c| Cell::Real(mean(c))));
    row.extend(coords.iter().map(|c| if c.len() > 1 { Cell::Real(variance(c)) } else { Cell::Missing }));
    summary.push(row)?;

    let mut timing = ResultTable::new(["command", "seconds"]);
    timing.push(vec!["sample".into(), Cell::Real(seconds)])?;

    Ok(SampleRun {
        chain,
        outputs: vec![
            ("samples.csv".into(), samples),
            ("summary.csv".into(), summary),
            ("timing.csv".into(), timing),
        ],
        seconds,
    })
}
