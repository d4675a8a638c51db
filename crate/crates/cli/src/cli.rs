//! Argument parsing and command dispatch.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args as ClapArgs, Parser, Subcommand};
use serde::de::DeserializeOwned;

use crate::config::{load_config, PeriodProbeConfig, SampleConfig};
use crate::experiments::{ginzburg, probe, quantile, sample, tradeoff};
use crate::table::{write_outputs, Outputs};

#[derive(Debug, Parser)]
#[command(name = "kinetic-hmc", version, about = "HMC with non-Gaussian kinetic energies")]
pub struct Args {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, ClapArgs)]
pub struct Common {
    /// JSON config; experiment defaults when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Overrides the seed in the config.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one chain.
    Sample {
        #[command(flatten)]
        common: Common,
    },
    /// Quantile regression convergence study.
    Quantile {
        #[command(flatten)]
        common: Common,
    },
    /// Ginzburg–Landau mixing table.
    Ginzburg {
        #[command(flatten)]
        common: Common,
    },
    /// ESJD against step size on a 1-d exponential power target.
    Tradeoff {
        #[command(flatten)]
        common: Common,
    },
    /// Deterministic diagnostics.
    Probe {
        #[command(subcommand)]
        probe: Probe,
    },
}

#[derive(Debug, Subcommand)]
pub enum Probe {
    Period {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
    },
    Growth {
        #[command(flatten)]
        common: Common,
    },
    Negligible {
        #[command(flatten)]
        common: Common,
    },
    ImplicitNoise {
        #[command(flatten)]
        common: Common,
    },
}

fn config_or_default<T: DeserializeOwned + Default>(path: &Option<PathBuf>) -> Result<T> {
    path.as_deref().map_or_else(|| Ok(T::default()), load_config)
}

fn finish(out: &Path, outputs: Outputs) -> Result<()> {
    write_outputs(out, &outputs)?;
    for (name, _) in &outputs {
        println!("{}", out.join(name).display());
    }
    Ok(())
}

/// Builds the global worker pool from `KINETIC_HMC_THREADS` when set.
pub fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var("KINETIC_HMC_THREADS") {
        let n: usize = v.trim().parse().with_context(|| format!("KINETIC_HMC_THREADS={v:?} is not a count"))?;
        // A pool that already exists keeps its size.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

pub fn run(args: &Args) -> Result<()> {
    init_threads()?;
    match &args.command {
        Command::Sample { common } => {
            let path = common.config.as_deref().context("sample requires --config")?;
            let cfg: SampleConfig = load_config(path)?;
            finish(&common.out, sample::run_sample(&cfg, common.seed)?.outputs)
        }
        Command::Quantile { common } => {
            let cfg = config_or_default(&common.config)?;
            finish(&common.out, quantile::run_quantile(&cfg, common.seed)?.outputs)
        }
        Command::Ginzburg { common } => {
            let cfg = config_or_default(&common.config)?;
            finish(&common.out, ginzburg::run_ginzburg(&cfg, common.seed)?.outputs)
        }
        Command::Tradeoff { common } => {
            let cfg = config_or_default(&common.config)?;
            finish(&common.out, tradeoff::run_tradeoff(&cfg, common.seed)?.outputs)
        }
        Command::Probe { probe } => match probe {
            Probe::Period { common, alpha, beta } => {
                let mut cfg: PeriodProbeConfig = config_or_default(&common.config)?;
                cfg.alpha = alpha.unwrap_or(cfg.alpha);
                cfg.beta = beta.unwrap_or(cfg.beta);
                finish(&common.out, probe::probe_period(&cfg)?.1)
            }
            Probe::Growth { common } => {
                let cfg = config_or_default(&common.config)?;
                finish(&common.out, probe::probe_growth(&cfg)?.1)
            }
            Probe::Negligible { common } => {
                let cfg = config_or_default(&common.config)?;
                finish(&common.out, probe::probe_negligible(&cfg, common.seed)?.1)
            }
            Probe::ImplicitNoise { common } => {
                let cfg = config_or_default(&common.config)?;
                finish(&common.out, probe::probe_implicit_noise(&cfg, common.seed)?.1)
            }
        },
    }
}
