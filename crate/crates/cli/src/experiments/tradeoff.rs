use anyhow::Result;
use kinetic_hmc::diagnostics::expected_squared_jump_distance;
use kinetic_hmc::targets::ExpPowerTarget;
use kinetic_hmc::{run_chain, ChainConfig};
use rayon::prelude::*;

use super::derive_seed;
use crate::config::{linear_grid, TradeoffExperimentConfig};
use crate::table::{Cell, Outputs, ResultTable};

#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffPoint {
    pub kinetic: String,
    pub step_size: f64,
    pub esjd: f64,
    pub acceptance_rate: f64,
}

pub struct TradeoffRun {
    pub points: Vec<TradeoffPoint>,
    pub outputs: Outputs,
}

impl TradeoffRun {
    pub fn curve(&self, kinetic: &str) -> Vec<&TradeoffPoint> {
        self.points.iter().filter(|p| p.kinetic == kinetic).collect()
    }
}

pub fn run_tradeoff(cfg: &TradeoffExperimentConfig, seed: Option<u64>) -> Result<TradeoffRun> {
    let seed = seed.unwrap_or(cfg.seed);
    let target = ExpPowerTarget::new(1, cfg.alpha)?;
    let grid = linear_grid(cfg.eps_min, cfg.eps_max, cfg.grid_points);
    let steps = cfg.steps.to_distribution();
    let mut points = Vec::new();
    for (k, spec) in cfg.kinetics.iter().enumerate() {
        let kinetic = spec.build(1)?;
        let burn_cfg = ChainConfig::new(cfg.burn_in_step_size, steps, cfg.burn_in.max(1), derive_seed(seed, &[k as u64]), vec![0.0]);
        let start = run_chain(&target, &kinetic, &burn_cfg)?.samples.pop().expect("chain has samples");
        let curve = grid
            .par_iter()
            .enumerate()
            .map(|(i, &eps)| {
                let chain_cfg =
                    ChainConfig::new(eps, steps, cfg.n_iterations, derive_seed(seed, &[k as u64, i as u64 + 1]), start.clone());
                let out = run_chain(&target, &kinetic, &chain_cfg)?;
                Ok(TradeoffPoint {
                    kinetic: spec.label(),
                    step_size: eps,
                    esjd: expected_squared_jump_distance(&out)?,
                    acceptance_rate: out.acceptance_rate,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        points.extend(curve);
    }
    let mut table = ResultTable::new(["kinetic", "eps", "esjd", "accept_rate"]);
    for p in &points {
        table.push(vec![p.kinetic.as_str().into(), Cell::Real(p.step_size), Cell::Real(p.esjd), Cell::Real(p.acceptance_rate)])?;
    }
    Ok(TradeoffRun { points, outputs: vec![("tradeoff.csv".into(), table)] })
}
