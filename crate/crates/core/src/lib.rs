//! Hamiltonian Monte Carlo with general kinetic energies.
//!
//! The sampler is written against two traits, [`Potential`] and
//! [`KineticEnergy`]. [`Kinetic`] covers the Gaussian, Laplace, exponential
//! power, Student-t, relativistic and relativistic power families; the
//! [`targets`] module holds the potentials used in the experiments.

pub mod diagnostics;
pub mod error;
pub mod gradcheck;
pub mod hmc;
pub mod integrator;
pub mod kinetics;
pub mod linalg;
pub mod model;
pub mod stats;
pub mod targets;

#[cfg(test)]
mod testutil;

pub use error::{ArsError, Error, Result};
pub use hmc::{run_chain, run_replicates, ChainConfig, ChainOutput, StepsDistribution};
pub use kinetics::{Kinetic, KineticFamily};
pub use linalg::SpdMatrix;
pub use model::{chain_rng, hamiltonian, ChainRng, KineticEnergy, PhasePoint, Potential};
